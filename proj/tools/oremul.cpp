// oremul: verification sweeps, benchmarks and operator conversion.
//
//   oremul verify  --algos mulweyl,naive --sizes 8,16 --prime 65521
//   oremul bench   --algos ivdh,mulweyl --sizes 64,128 --format csv
//   oremul bench   --count-blocks --algos mulweyl --sizes 32
//   oremul convert --to theta -i op.json

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oremul/oremul.hpp"

namespace {

struct Options {
  std::vector<std::string> algos;
  std::vector<std::size_t> sizes;
  std::uint64_t prime = 65521;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::string format = "table";
  std::string strategy = "naive";
  bool verify = false;
  bool count_blocks = false;
  std::size_t block_size = 0;
  double timeout = 60.0;
};

void add_sweep_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--algos", o.algos, "Comma-separated algorithm names")->delimiter(',')->capture_default_str();
  cmd->add_option("--sizes", o.sizes, "Comma-separated sizes n; operands have bidegree (n, n)")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--prime", o.prime, "Characteristic, 0 for the rationals")->capture_default_str();
  cmd->add_option("--trials", o.trials, "Random pairs per size")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed of the random pairs")->capture_default_str();
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "table"}))->capture_default_str();
  cmd->add_option("--strategy", o.strategy, "Matrix product strategy: naive, blocked, strassen, banded, banded-strassen")
      ->capture_default_str();
  cmd->add_flag("--count-blocks", o.count_blocks, "Tally n x n block products");
  cmd->add_option("--block-size", o.block_size, "Block size for the tallies (default: n)");
  cmd->add_option("--timeout", o.timeout, "Per-run limit in seconds")->capture_default_str();
}

oremul::BenchConfig to_config(const Options& o) {
  oremul::BenchConfig cfg;
  cfg.algos = o.algos;
  cfg.sizes = o.sizes;
  cfg.p = o.prime;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.format = oremul::parse_format(o.format);
  cfg.strategy = oremul::parse_strategy(o.strategy);
  cfg.verify = o.verify;
  cfg.count_blocks = o.count_blocks;
  cfg.block_size = o.block_size;
  cfg.timeout = o.timeout;
  return cfg;
}

int sweep(const Options& o) {
  auto cfg = to_config(o);
  auto records = oremul::run(cfg);
  std::cout << oremul::render(records, cfg.format);
  const bool ok = oremul::all_passed(records);
  if (cfg.verify) std::cerr << (ok ? "all verifications passed" : "verification FAILED") << '\n';
  return ok ? 0 : 1;
}

int convert(const std::string& input, const std::string& output, const std::string& to) {
  oremul::json j;
  if (input == "-") {
    j = oremul::json::parse(std::cin);
  } else {
    std::ifstream in(input);
    if (!in) throw oremul::FormatError("cannot open " + input);
    j = oremul::json::parse(in);
  }
  const auto target = oremul::parse_var_tag(to);
  const auto p = oremul::json_characteristic(j);
  const auto out = p == 0 ? oremul::convert_json(j, oremul::RationalField{}, target)
                          : oremul::convert_json(j, oremul::PrimeField(p), target);
  if (output == "-") {
    std::cout << out.dump() << '\n';
  } else {
    std::ofstream os(output);
    if (!os) throw oremul::FormatError("cannot write " + output);
    os << out.dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplication of linear differential operators"};
  app.require_subcommand(1);

  Options verify_opts;
  verify_opts.algos = oremul::algorithm_names();
  verify_opts.sizes = {4, 8, 16};
  verify_opts.trials = 3;
  verify_opts.verify = true;
  auto* verify_cmd = app.add_subcommand("verify", "Check every algorithm against the naive product");
  add_sweep_options(verify_cmd, verify_opts);

  Options bench_opts;
  bench_opts.algos = oremul::algorithm_names();
  bench_opts.sizes = {16, 32, 64};
  auto* bench_cmd = app.add_subcommand("bench", "Time products of random operators");
  add_sweep_options(bench_cmd, bench_opts);
  bench_cmd->add_flag("--verify", bench_opts.verify, "Also check against the naive product");

  std::string input = "-", output = "-", to;
  auto* convert_cmd = app.add_subcommand("convert", "Convert a JSON operator between the partial and theta forms");
  convert_cmd->add_option("-i,--input", input, "Input file, - for stdin")->capture_default_str();
  convert_cmd->add_option("-o,--output", output, "Output file, - for stdout")->capture_default_str();
  convert_cmd->add_option("--to", to, "Target form")->required()->check(CLI::IsMember({"partial", "theta"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify_cmd->parsed()) return sweep(verify_opts);
    if (bench_cmd->parsed()) return sweep(bench_opts);
    return convert(input, output, to);
  } catch (const oremul::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const oremul::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
