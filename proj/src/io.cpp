#include "wiretap/io.hpp"

#include <fstream>
#include <sstream>

namespace wiretap {

namespace {

using nlohmann::json;

Eigen::MatrixXd parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) {
    throw ChannelFileError("matrix " + name + " must be a nonempty array of rows");
  }
  const size_t rows = j.size();
  size_t cols = 0;
  Eigen::MatrixXd m;
  for (size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.empty()) {
      throw ChannelFileError("matrix " + name + ": row " + std::to_string(i) +
                             " must be a nonempty array");
    }
    if (i == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw ChannelFileError("matrix " + name + ": row " + std::to_string(i) +
                             " has inconsistent length");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw ChannelFileError("matrix " + name + ": entry (" +
                               std::to_string(i) + "," + std::to_string(c) +
                               ") is not a number");
      }
      const double v = row[c].get<double>();
      if (!std::isfinite(v)) {
        throw ChannelFileError("matrix " + name + ": entry (" +
                               std::to_string(i) + "," + std::to_string(c) +
                               ") is not finite");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

SymMatrix parse_sym_pd(const json& j, const std::string& name) {
  Eigen::MatrixXd m = parse_matrix(j, name);
  if (m.rows() != m.cols()) {
    throw ChannelFileError("matrix " + name + " must be square");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + m.norm())) {
    throw ChannelFileError("matrix " + name + " is not symmetric within 1e-9");
  }
  SymMatrix s(m);
  const double mineig = min_eigenvalue(s);
  if (mineig <= 0) {
    std::ostringstream msg;
    msg << "matrix " << name << " is not positive definite (min eigenvalue "
        << mineig << ")";
    throw ChannelFileError(msg.str());
  }
  return s;
}

}  // namespace

ChannelInput parse_channel(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
    throw ChannelFileError("channel file must be an object with a \"type\" field");
  }
  const std::string type = doc["type"].get<std::string>();
  if (type == "canonical") {
    for (const char* key : {"K_r", "K_e", "S"}) {
      if (!doc.contains(key)) {
        throw ChannelFileError(std::string("canonical channel missing ") + key);
      }
    }
    CanonicalChannel ch{parse_sym_pd(doc["K_r"], "K_r"),
                        parse_sym_pd(doc["K_e"], "K_e"),
                        parse_sym_pd(doc["S"], "S")};
    if (ch.Ke.dim() != ch.Kr.dim() || ch.S.dim() != ch.Kr.dim()) {
      throw ChannelFileError("canonical matrices must share one dimension");
    }
    return ch;
  }
  if (type == "general") {
    for (const char* key : {"H_r", "H_e"}) {
      if (!doc.contains(key)) {
        throw ChannelFileError(std::string("general channel missing ") + key);
      }
    }
    GeneralChannel ch{parse_matrix(doc["H_r"], "H_r"),
                      parse_matrix(doc["H_e"], "H_e"),
                      TotalPower{1.0}};
    if (ch.Hr.cols() != ch.He.cols()) {
      throw ChannelFileError("H_r and H_e must have the same column count");
    }
    if (doc.contains("power")) {
      if (!doc["power"].is_number() || doc["power"].get<double>() <= 0) {
        throw ChannelFileError("field power must be a positive number");
      }
      ch.constraint = TotalPower{doc["power"].get<double>()};
    } else if (doc.contains("S")) {
      SymMatrix s = parse_sym_pd(doc["S"], "S");
      if (s.dim() != ch.nt()) {
        throw ChannelFileError("S must match the transmit dimension");
      }
      ch.constraint = CovarianceCap{s};
    } else {
      throw ChannelFileError("general channel needs either \"power\" or \"S\"");
    }
    return ch;
  }
  throw ChannelFileError("unknown channel type \"" + type + "\"");
}

ChannelInput load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ChannelFileError("cannot open channel file " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ChannelFileError("JSON parse error in " + path + ": " + e.what());
  }
  return parse_channel(doc);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json channel_to_json(const CanonicalChannel& ch) {
  return json{{"type", "canonical"},
              {"K_r", matrix_to_json(ch.Kr.mat())},
              {"K_e", matrix_to_json(ch.Ke.mat())},
              {"S", matrix_to_json(ch.S.mat())}};
}

void save_channel(const CanonicalChannel& ch, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ChannelFileError("cannot write channel file " + path);
  }
  out << channel_to_json(ch).dump(2) << "\n";
}

nlohmann::json to_json(const KktCertificate& cert) {
  return json{{"M1", matrix_to_json(cert.M1.mat())},
              {"M2", matrix_to_json(cert.M2.mat())},
              {"stationarity_residual", cert.stationarity_residual},
              {"comp_slack_1", cert.comp_slack_1},
              {"comp_slack_2", cert.comp_slack_2},
              {"psd_margin", cert.psd_margin},
              {"valid", cert.valid(1e-6)}};
}

nlohmann::json to_json(const CapacityResult& r) {
  return json{{"value_nats", r.value},
              {"Kx_star", matrix_to_json(r.Kx_star.mat())},
              {"certificate", to_json(r.certificate)},
              {"restarts_used", r.restarts_used},
              {"converged", r.converged}};
}

nlohmann::json to_json(const GeneralCapacityResult& r) {
  return json{{"eps", r.eps},
              {"values", r.values},
              {"extrapolated", r.extrapolated},
              {"converged", r.converged},
              {"final", to_json(r.final)}};
}

nlohmann::json to_json(const EnhancedChannel& e) {
  return json{{"Ktilde_r", matrix_to_json(e.Ktilde_r.mat())},
              {"degraded_vs_Kr", e.degraded_vs_Kr},
              {"degraded_vs_Ke", e.degraded_vs_Ke},
              {"logdet_preserved", e.logdet_preserved},
              {"kkt1_valid", e.kkt1_valid},
              {"residuals",
               json{{"min_eig_Ktilde", e.residuals.min_eig_Ktilde},
                    {"min_eig_Kr_gap", e.residuals.min_eig_Kr_gap},
                    {"min_eig_Ke_gap", e.residuals.min_eig_Ke_gap},
                    {"logdet_gap", e.residuals.logdet_gap},
                    {"kkt1_stationarity", e.residuals.kkt1_stationarity},
                    {"kkt1_comp_slack", e.residuals.kkt1_comp_slack}}}};
}

nlohmann::json to_json(const ChainReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back(
        json{{"name", s.name}, {"pass", s.pass}, {"residual", s.residual}});
  }
  return json{{"steps", steps},
              {"all_pass", r.all_pass},
              {"enhanced", to_json(r.enhanced)},
              {"degraded_value", r.degraded_value}};
}

nlohmann::json to_json(const ParallelResult& r) {
  return json{{"value_nats", r.value},
              {"Kx_star", matrix_to_json(r.Kx_star.mat())},
              {"active_set", r.active_set}};
}

nlohmann::json to_json(const SatoResult& r) {
  return json{{"value_nats", r.value},
              {"Kcross_star", matrix_to_json(r.Kcross_star)},
              {"Kx_star", matrix_to_json(r.Kx_star.mat())},
              {"converged", r.converged},
              {"outer_iterations", r.outer_values.size()}};
}

nlohmann::json to_json(const CrosscheckReport& r) {
  return json{{"solver_value_nats", r.solver_value},
              {"sato_value_nats", r.sato_value},
              {"gap", r.gap},
              {"dominance", r.dominance},
              {"pass", r.pass},
              {"capacity", to_json(r.capacity)},
              {"sato", to_json(r.sato)}};
}

nlohmann::json to_json(const CheckReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back(json{{"name", e.name},
                           {"statistic", e.statistic},
                           {"threshold", e.threshold},
                           {"stderr", e.stderr_},
                           {"pass", e.pass}});
  }
  return json{{"entries", entries}, {"all_pass", r.all_pass}};
}

}  // namespace wiretap
