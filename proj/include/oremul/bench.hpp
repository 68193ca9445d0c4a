#pragma once

// Benchmark and verification sweeps over seeded random operator pairs.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oremul/charp.hpp"
#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/laurent_mul.hpp"
#include "oremul/matrix.hpp"
#include "oremul/mul_weyl.hpp"
#include "oremul/opcount.hpp"
#include "oremul/ore.hpp"
#include "oremul/random.hpp"
#include "oremul/theta_mul.hpp"

namespace oremul {

enum class OutputFormat { csv, table };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "table") return OutputFormat::table;
  throw InvalidConfig("unknown output format '" + s + "'");
}

struct BenchConfig {
  std::vector<std::string> algos;
  std::vector<std::size_t> sizes;  // bidegree (n, n) per size
  std::uint64_t p = 65521;         // 0 selects the rationals
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::table;
  bool verify = false;
  bool count_blocks = false;
  std::size_t block_size = 0;  // 0: the size n of the run
  MatMulStrategy strategy = MatMulStrategy::naive;
  double timeout = 60.0;  // seconds
  // Test hook: perturbs one coefficient of every product before verification.
  bool fault_injection = false;
};

enum class RunStatus { ok, skipped, timeout };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::skipped: return "skipped";
    case RunStatus::timeout: return "timeout";
  }
  return "?";
}

struct BenchRecord {
  std::string algo;
  VarTag tag = VarTag::partial;
  std::size_t d = 0, r = 0;
  std::uint64_t p = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::ok;
  std::string note;
  std::optional<bool> verified;
  BlockCounter blocks;
  std::uint64_t ops = 0;
  std::uint64_t elapsed_ns = 0;

  bool failed() const { return verified.has_value() && !*verified; }
};

struct AlgorithmInfo {
  std::string name;
  VarTag tag;
  bool uses_blocks;
};

inline const std::vector<AlgorithmInfo>& algorithms() {
  static const std::vector<AlgorithmInfo> all = {
      {"naive", VarTag::partial, false},       {"iter-dx", VarTag::partial, false},
      {"iter-x", VarTag::partial, false},      {"takayama", VarTag::partial, false},
      {"vdh", VarTag::partial, true},          {"ivdh", VarTag::partial, true},
      {"mulweyl", VarTag::partial, true},      {"charp", VarTag::partial, false},
      {"naive-theta", VarTag::theta, false},   {"vdh-theta", VarTag::theta, true},
      {"ivdh-theta", VarTag::theta, true},     {"charp-theta", VarTag::theta, false},
  };
  return all;
}

inline const AlgorithmInfo& algorithm_info(const std::string& name) {
  for (const auto& a : algorithms())
    if (a.name == name) return a;
  throw UnknownAlgorithm("unknown algorithm '" + name + "'");
}

inline std::vector<std::string> algorithm_names() {
  std::vector<std::string> out;
  for (const auto& a : algorithms()) out.push_back(a.name);
  return out;
}

/// Runs the named product; the counter and options only matter for the
/// evaluation-interpolation algorithms.
template <CoefficientField F>
OrePoly<F> multiply_with(const std::string& algo, const OrePoly<F>& b, const OrePoly<F>& a,
                         BlockCounter* counter = nullptr, const MatMulOptions& opts = {}) {
  if (algo == "naive" || algo == "naive-theta") return mul_naive(b, a);
  if (algo == "iter-dx") return mul_iter_dx(b, a);
  if (algo == "iter-x") return mul_iter_x(b, a);
  if (algo == "takayama") return mul_takayama(b, a);
  if (algo == "vdh") return mul_partial_vdh(b, a, EvalVariant::vandermonde, counter, opts);
  if (algo == "ivdh") return mul_partial_vdh(b, a, EvalVariant::fast, counter, opts);
  if (algo == "mulweyl") return mul_weyl(b, a, counter, opts);
  if (algo == "vdh-theta") return mul_theta_vdh(b, a, EvalVariant::vandermonde, counter, opts);
  if (algo == "ivdh-theta") return mul_theta_vdh(b, a, EvalVariant::fast, counter, opts);
  if (algo == "charp") return mul_partial_p(b, a);
  if (algo == "charp-theta") return mul_theta_p(b, a);
  throw UnknownAlgorithm("unknown algorithm '" + algo + "'");
}

/// Seed of the operator pair shared by all algorithms at (n, trial).
inline std::uint64_t pair_seed(std::uint64_t seed, std::size_t n, std::size_t trial) {
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (n + 1)) ^ (0xbf58476d1ce4e5b9ULL * (trial + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <CoefficientField F>
std::pair<OrePoly<F>, OrePoly<F>> random_pair(std::size_t n, VarTag tag, const F& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto b = random_op(n, n, tag, f, rng);
  auto a = random_op(n, n, tag, f, rng);
  return {std::move(b), std::move(a)};
}

inline void validate(const BenchConfig& cfg) {
  if (cfg.algos.empty()) throw InvalidConfig("no algorithms given");
  if (cfg.sizes.empty()) throw InvalidConfig("no sizes given");
  for (auto n : cfg.sizes)
    if (n == 0) throw InvalidConfig("sizes must be positive");
  if (cfg.trials < 1) throw InvalidConfig("trials must be at least 1");
  if (!(cfg.timeout > 0)) throw InvalidConfig("timeout must be positive");
  for (const auto& a : cfg.algos) algorithm_info(a);
}

namespace detail {

template <CoefficientField F>
std::vector<BenchRecord> run_over(const BenchConfig& cfg, const F& f) {
  std::vector<BenchRecord> out;
  using Clock = std::chrono::steady_clock;
  for (const auto& name : cfg.algos) {
    const auto& info = algorithm_info(name);
    bool timed_out = false;
    for (auto n : cfg.sizes) {
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        BenchRecord rec;
        rec.algo = name;
        rec.tag = info.tag;
        rec.d = rec.r = n;
        rec.p = cfg.p;
        rec.trial = t;
        rec.seed = pair_seed(cfg.seed, n, t);
        rec.blocks.block_size = cfg.block_size ? cfg.block_size : n;
        if (timed_out) {
          // A smaller instance already ran past the limit.
          rec.status = RunStatus::timeout;
          rec.note = "not run";
          out.push_back(std::move(rec));
          continue;
        }
        const auto [b, a] = random_pair(n, info.tag, f, rec.seed);
        MatMulOptions opts;
        BlockCounter* counter = nullptr;
        if (cfg.count_blocks && info.uses_blocks) {
          opts.strategy = cfg.strategy == MatMulStrategy::naive ? MatMulStrategy::blocked : cfg.strategy;
          opts.block_size = rec.blocks.block_size;
          counter = &rec.blocks;
        } else {
          opts.strategy = cfg.strategy;
          opts.block_size = cfg.block_size;
        }
        std::optional<OrePoly<F>> c;
        const auto t0 = Clock::now();
        try {
          opcount::Scope ops;
          c = multiply_with(name, b, a, counter, opts);
          rec.ops = ops.elapsed();
        } catch (const CharacteristicTooSmall& e) {
          rec.status = RunStatus::skipped;
          rec.note = e.what();
        } catch (const ZeroCharacteristic& e) {
          rec.status = RunStatus::skipped;
          rec.note = e.what();
        }
        rec.elapsed_ns = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
        if (rec.status == RunStatus::ok && rec.elapsed_ns > static_cast<std::uint64_t>(cfg.timeout * 1e9)) {
          rec.status = RunStatus::timeout;
          rec.note = "exceeded limit";
          timed_out = true;
        }
        if (c && cfg.verify) {
          if (cfg.fault_injection) {
            auto g = c->to_grid();
            if (g.empty()) g = BivariateGrid<F>(f, 1, 1);
            g.at(0, 0) = f.add(g.at(0, 0), f.one());
            c = OrePoly<F>::from_grid(g, info.tag);
          }
          rec.verified = *c == mul_naive(b, a);
        }
        out.push_back(std::move(rec));
      }
    }
  }
  return out;
}

}  // namespace detail

/// For each (algorithm, n, trial), multiplies the shared pair of bidegree
/// (n, n). Algorithms whose characteristic requirement fails are recorded as
/// skipped. Runs are not interrupted; one exceeding the timeout is flagged and
/// the larger sizes of that algorithm are not run.
inline std::vector<BenchRecord> run(const BenchConfig& cfg) {
  validate(cfg);
  if (cfg.p == 0) return detail::run_over(cfg, RationalField{});
  return detail::run_over(cfg, PrimeField(cfg.p));
}

inline bool all_passed(const std::vector<BenchRecord>& records) {
  return std::none_of(records.begin(), records.end(), [](const BenchRecord& r) { return r.failed(); });
}

inline std::vector<std::string> record_header(bool with_time = true) {
  std::vector<std::string> h = {"algo",           "var",         "p",           "d",
                                "r",              "trial",       "seed",        "status",
                                "verified",       "block_size",  "blocks",      "blocks_naive",
                                "blocks_strassen", "blocks_skipped", "ops"};
  if (with_time) h.push_back("time_ns");
  return h;
}

inline std::vector<std::string> record_fields(const BenchRecord& r, bool with_time = true) {
  std::vector<std::string> v = {r.algo,
                                to_string(r.tag),
                                std::to_string(r.p),
                                std::to_string(r.d),
                                std::to_string(r.r),
                                std::to_string(r.trial),
                                std::to_string(r.seed),
                                to_string(r.status),
                                r.verified ? (*r.verified ? "pass" : "FAIL") : "-",
                                std::to_string(r.blocks.block_size),
                                std::to_string(r.blocks.total()),
                                std::to_string(r.blocks.naive_products),
                                std::to_string(r.blocks.strassen_products),
                                std::to_string(r.blocks.skipped_products),
                                std::to_string(r.ops)};
  if (with_time) v.push_back(std::to_string(r.elapsed_ns));
  return v;
}

inline std::string render_csv(const std::vector<BenchRecord>& records, bool with_time = true) {
  std::ostringstream os;
  auto line = [&os](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '\n';
  };
  line(record_header(with_time));
  for (const auto& r : records) line(record_fields(r, with_time));
  return os.str();
}

inline std::string render_table(const std::vector<BenchRecord>& records) {
  std::vector<std::string> head = {"algo", "var", "p", "n", "trial", "status", "verified", "blocks", "ops", "time_ms"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : records) {
    std::ostringstream ms;
    ms << std::fixed << std::setprecision(3) << static_cast<double>(r.elapsed_ns) / 1e6;
    rows.push_back({r.algo, to_string(r.tag), std::to_string(r.p), std::to_string(r.d), std::to_string(r.trial),
                    to_string(r.status), r.verified ? (*r.verified ? "pass" : "FAIL") : "-",
                    std::to_string(r.blocks.total()), std::to_string(r.ops),
                    r.status == RunStatus::skipped ? "-" : ms.str()});
  }
  std::vector<std::size_t> w(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) w[i] = head[i].size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) w[i] = std::max(w[i], row[i].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << "  ";
      // Names left-aligned, numbers right-aligned.
      if (i <= 1 || i == 5 || i == 6) os << std::left; else os << std::right;
      os << std::setw(static_cast<int>(w[i])) << v[i];
    }
    os << '\n';
  };
  line(head);
  for (const auto& row : rows) line(row);
  for (const auto& r : records)
    if (r.status == RunStatus::skipped) os << "# " << r.algo << " n=" << r.d << " skipped: " << r.note << '\n';
  return os.str();
}

inline std::string render(const std::vector<BenchRecord>& records, OutputFormat format) {
  return format == OutputFormat::csv ? render_csv(records) : render_table(records);
}

}  // namespace oremul
