#pragma once

#include "schottky/affine.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace schottky {

using Json = nlohmann::ordered_json;

// Malformed input files and arguments.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GroupSpec {
  int d = 1;
  int n = 1;
  std::vector<double> thetas;
  std::vector<std::pair<int, int>> pairing;
  std::vector<Mat> g_less;
  double epsilon = 0.75;
  std::vector<Vec> t;  // optional translations; empty means the canonical ones
};

GroupSpec parse_group_spec(const Json& j);
GroupSpec read_group_spec(const std::string& path);
Json to_json(const GroupSpec& spec);
SchottkyGroup build_group(const GroupSpec& spec);

// Evenly spaced angles k pi / n (k < 2n), component k paired with k + n.
GroupSpec demo_spec(int d, int n, double strength, double epsilon);

Json to_json(const Vec& v);
Json to_json(const Mat& m);
Json context_to_json(const SpaceContext& ctx);
Json mtis_to_json(const Mtis& V);
Json to_json(const PingPongReport& r);
Json to_json(const ProductAuditReport& r);
Json to_json(const InTReport& r);
Json to_json(const AngleControlReport& r);

}  // namespace schottky
