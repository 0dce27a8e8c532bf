#include "schottky/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace schottky::cli;

int main(int argc, char** argv) {
  CLI::App app{"Schottky groups in SO(d+1, d): certification, tiling and export"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "write a demo group spec");
  g->add_option("--d", gen.d, "half-dimension d (odd)");
  g->add_option("--n", gen.n, "number of generators");
  g->add_option("--strength", gen.strength, "contraction strength s(g_i); 0 picks tan(eps_i)^4/10");
  g->add_option("--epsilon", gen.epsilon, "frameset-level radius epsilon");
  g->add_option("--out", gen.out, "output file (default stdout)");

  CertifyOptions cert;
  auto* c = app.add_subcommand("certify", "run every certification on a group spec");
  c->add_option("spec", cert.spec, "group spec JSON")->required();
  c->add_option("--samples", cert.samples, "samples per map for the sphere ping-pong");
  c->add_option("--seed", cert.seed, "random seed");
  c->add_option("--max-len", cert.max_len, "longest word in the product audit");
  c->add_option("--out", cert.out, "report file (default stdout)");

  TraceOptions tr;
  auto* t = app.add_subcommand("trace", "trace points back to the fundamental domain");
  t->add_option("spec", tr.spec, "group spec JSON")->required();
  t->add_option("--points", tr.points, "file with one point per line");
  t->add_option("--random", tr.random, "number of random points in the ball of radius 10|t|");
  t->add_option("--max-steps", tr.max_steps, "step budget per point");
  t->add_option("--samples", tr.samples, "samples for the certification precheck");
  t->add_option("--seed", tr.seed, "random seed");
  t->add_flag("--force", tr.force, "trace even if the group is not certified");
  t->add_option("--out", tr.out, "CSV file (default stdout)");

  ExportOptions ex;
  auto* e = app.add_subcommand("export", "write point clouds for plotting");
  e->add_option("spec", ex.spec, "group spec JSON")->required();
  e->add_option("--what", ex.what, "wings, domains or tiles")->required();
  e->add_option("--resolution", ex.resolution, "grid resolution");
  e->add_option("--out", ex.out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kPass : kBadInput;
  }
  if (*g) return cmd_gen(gen, std::cout, std::cerr);
  if (*c) return cmd_certify(cert, std::cout, std::cerr);
  if (*t) return cmd_trace(tr, std::cout, std::cerr);
  return cmd_export(ex, std::cout, std::cerr);
}
