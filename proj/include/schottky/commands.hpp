#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace schottky::cli {

enum Exit : int { kPass = 0, kFail = 1, kInconclusive = 2, kBadInput = 3, kPrecondition = 4 };

struct GenOptions {
  int d = 1;
  int n = 2;
  double strength = 0.0;  // 0 selects tan(min eps_i)^4 / 10
  double epsilon = 0.75;
  std::string out;
};

struct CertifyOptions {
  std::string spec;
  int samples = 10000;
  std::uint64_t seed = 1;
  int max_len = 6;
  std::string out;
};

struct TraceOptions {
  std::string spec;
  std::string points;  // file of points, one per line
  int random = 0;      // number of random starting points when no file is given
  int max_steps = 60;
  int samples = 10000;
  std::uint64_t seed = 1;
  bool force = false;
  std::string out;
};

struct ExportOptions {
  std::string spec;
  std::string what;  // wings | domains | tiles
  int resolution = 16;
  std::string out;
};

// Each command writes its product to `out` (or the --out file) and diagnostics
// to `err`, and returns the process exit code.
int cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err);
int cmd_certify(const CertifyOptions& o, std::ostream& out, std::ostream& err);
int cmd_trace(const TraceOptions& o, std::ostream& out, std::ostream& err);
int cmd_export(const ExportOptions& o, std::ostream& out, std::ostream& err);

}  // namespace schottky::cli
