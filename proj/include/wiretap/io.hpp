#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "wiretap/bounds.hpp"
#include "wiretap/channel.hpp"
#include "wiretap/eei.hpp"
#include "wiretap/enhance.hpp"
#include "wiretap/solver.hpp"
#include "wiretap/sweep.hpp"

namespace wiretap {

/// Thrown for malformed channel files; the message names the offending
/// field or matrix.
class ChannelFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ChannelInput = std::variant<CanonicalChannel, GeneralChannel>;

/// Parses a channel document:
///   {"type":"canonical","K_r":[[..]],"K_e":[[..]],"S":[[..]]}
///   {"type":"general","H_r":[[..]],"H_e":[[..]],"power":P}
///   {"type":"general","H_r":[[..]],"H_e":[[..]],"S":[[..]]}
/// Canonical matrices must be square, symmetric within 1e-9, and PD.
ChannelInput parse_channel(const nlohmann::json& doc);
ChannelInput load_channel(const std::string& path);

nlohmann::json channel_to_json(const CanonicalChannel& ch);
void save_channel(const CanonicalChannel& ch, const std::string& path);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);

nlohmann::json to_json(const KktCertificate& cert);
nlohmann::json to_json(const CapacityResult& r);
nlohmann::json to_json(const GeneralCapacityResult& r);
nlohmann::json to_json(const EnhancedChannel& e);
nlohmann::json to_json(const ChainReport& r);
nlohmann::json to_json(const ParallelResult& r);
nlohmann::json to_json(const SatoResult& r);
nlohmann::json to_json(const CrosscheckReport& r);
nlohmann::json to_json(const CheckReport& r);

}  // namespace wiretap
