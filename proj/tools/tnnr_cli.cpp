// Tensor completion benchmark harness.
//
// Subcommands:
//   synth      random low-tubal-rank recovery runs with known ground truth
//   inpaint    complete a TNS3 tensor under a mask, report PSNR/SSIM
//   compare    run several presets on one instance, emit a CSV table
//   gen-image  write the bundled deterministic 64x64x3 rank-4 test image
//
// Exit codes: 0 ok, 2 usage, 3 divergence, 4 I/O.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tnnr/io.hpp"
#include "tnnr/metrics.hpp"
#include "tnnr/solver.hpp"
#include "tnnr/tsvd.hpp"

using nlohmann::json;
using namespace tnnr;

namespace {

struct SolverFlags {
  double lambda = 5.0, theta1 = 0.49, theta2 = 0.49, epsilon = 0.01, lf = 2.0;
  std::string mu = "4";  // number or "auto"
  double scale_target = -1.0;  // negative = auto rule
  int max_iters = 500;
  double tol = 1e-4;
  std::string penalty = "smooth23:1e-6";
  std::string preset = "tnnr";
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--lambda", f.lambda, "penalty weight");
  cmd->add_option("--theta1", f.theta1, "inertial weight for the prox point");
  cmd->add_option("--theta2", f.theta2, "inertial weight for the gradient point");
  cmd->add_option("--epsilon", f.epsilon, "stepsize-rule slack");
  cmd->add_option("--lf", f.lf, "gradient Lipschitz constant");
  cmd->add_option("--mu", f.mu, "stepsize denominator, a number or 'auto'");
  cmd->add_option("--scale-target", f.scale_target, "internal rescale target (neg auto, 0 off)");
  cmd->add_option("--max-iters", f.max_iters, "iteration cap");
  cmd->add_option("--tol", f.tol, "relative-change stop tolerance");
  cmd->add_option("--penalty", f.penalty, "identity | power23 | smooth23:EPS");
  cmd->add_option("--preset", f.preset, "tnnr | tnn | pstnn:N | ttnn:N | wtnn:EPS | wsp:P,C,EPS");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--out", f.out_dir, "output directory");
}

PenaltyFunction parse_penalty(const std::string& s) {
  if (s == "identity") return PenaltyFunction::identity();
  if (s == "power23") return PenaltyFunction::power(2.0 / 3.0);
  if (s.rfind("smooth23", 0) == 0) {
    double eps = 1e-6;
    if (auto pos = s.find(':'); pos != std::string::npos) eps = std::stod(s.substr(pos + 1));
    return PenaltyFunction::smoothed_power(2.0 / 3.0, eps);
  }
  throw ConfigError("unknown penalty: " + s);
}

// Empty result means the adaptive scheme ("tnnr").
std::optional<WeightScheme> parse_preset(const std::string& s, const Tensor3& reference,
                                         const PenaltyFunction& /*penalty*/) {
  if (s == "tnnr") return std::nullopt;
  std::string tag = s;
  std::string args;
  if (auto pos = s.find(':'); pos != std::string::npos) {
    tag = s.substr(0, pos);
    args = s.substr(pos + 1);
  }
  PresetParams params;
  if (tag == "pstnn" || tag == "ttnn") {
    if (!args.empty()) params.truncation = std::stoi(args);
  } else if (tag == "wtnn") {
    if (!args.empty()) params.eps = std::stod(args);
  } else if (tag == "wsp") {
    if (!args.empty()) {
      std::istringstream in(args);
      char comma;
      if (!(in >> params.p >> comma >> params.c >> comma >> params.eps)) {
        throw ConfigError("wsp preset needs P,C,EPS");
      }
    }
  } else if (tag != "tnn") {
    throw ConfigError("unknown preset: " + s);
  }
  return classic_preset(tag, params, reference.dims(), &reference);
}

SolverConfig make_config(const SolverFlags& f) {
  SolverConfig cfg;
  cfg.lambda = f.lambda;
  cfg.theta1 = f.theta1;
  cfg.theta2 = f.theta2;
  cfg.epsilon = f.epsilon;
  cfg.lf = f.lf;
  if (f.mu == "auto") {
    cfg.mu_fixed.reset();
  } else {
    cfg.mu_fixed = std::stod(f.mu);
  }
  cfg.scale_target = f.scale_target;
  cfg.max_iters = f.max_iters;
  cfg.tol_rel_change = f.tol;
  cfg.penalty = parse_penalty(f.penalty);
  cfg.seed = f.seed;
  return cfg;
}

json config_echo(const SolverConfig& cfg, const SolverFlags& f) {
  return json{{"lambda", cfg.lambda},
              {"theta1", cfg.theta1},
              {"theta2", cfg.theta2},
              {"epsilon", cfg.epsilon},
              {"lf", cfg.lf},
              {"mu", cfg.mu()},
              {"scale_target", cfg.scale_target},
              {"max_iters", cfg.max_iters},
              {"tol_rel_change", cfg.tol_rel_change},
              {"penalty", f.penalty},
              {"preset", f.preset},
              {"seed", f.seed}};
}

// Affine map of both tensors by ref's range so SSIM's [0,1] constants apply.
double ssim_vs(const Tensor3& x, const Tensor3& ref) {
  double lo = ref.data()[0], hi = ref.data()[0];
  for (std::int64_t i = 0; i < ref.size(); ++i) {
    lo = std::min(lo, ref.data()[i]);
    hi = std::max(hi, ref.data()[i]);
  }
  if (hi <= lo) hi = lo + 1.0;
  Tensor3 a = x, b = ref;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    a.data()[i] = (a.data()[i] - lo) / (hi - lo);
    b.data()[i] = (b.data()[i] - lo) / (hi - lo);
  }
  return ssim(a, b);
}

double peak_of(const Tensor3& ref) {
  double peak = 0.0;
  for (std::int64_t i = 0; i < ref.size(); ++i) peak = std::max(peak, std::abs(ref.data()[i]));
  return peak > 0.0 ? peak : 1.0;
}

struct RunMetrics {
  double psnr_db = 0.0, ssim_val = 0.0, relerr = 0.0, seconds = 0.0;
  int iterations = 0;
  std::string stop_reason;
};

json metrics_json(const RunMetrics& m, const std::string& trace_path) {
  json j{{"psnr_db", std::isinf(m.psnr_db) ? json("inf") : json(m.psnr_db)},
         {"ssim", m.ssim_val},
         {"relative_error", m.relerr},
         {"iterations", m.iterations},
         {"seconds", m.seconds},
         {"stop_reason", m.stop_reason},
         {"trace", trace_path}};
  return j;
}

RunMetrics run_one(const Tensor3& truth, const ObservationMask& mask, const SolverConfig& cfg,
                   const std::string& preset, const PenaltyFunction& penalty,
                   const std::string& trace_path, bool use_gt_stop,
                   Tensor3* recovered = nullptr) {
  LossModel loss(mask, truth);
  Tensor3 x0 = loss.observed;
  auto w0 = parse_preset(preset, x0, penalty);
  SolverConfig c = cfg;
  if (use_gt_stop) c.tol_ground_truth = 1e-3;
  SolveResult res = solve(x0, c, w0, loss, use_gt_stop ? &truth : nullptr);
  if (!trace_path.empty()) res.trace.write_csv(trace_path);

  RunMetrics m;
  Tensor3 err = res.x;
  err -= truth;
  m.relerr = frobenius_norm(err) / std::max(frobenius_norm(truth), 1e-300);
  m.psnr_db = psnr(res.x, truth, peak_of(truth));
  m.ssim_val = ssim_vs(res.x, truth);
  m.iterations = res.iterations;
  m.seconds = res.trace.records.empty() ? 0.0 : res.trace.records.back().seconds;
  m.stop_reason = res.trace.stop_reason;
  if (recovered) *recovered = std::move(res.x);
  return m;
}

int worker_cap() {
  if (const char* env = std::getenv("TNNR_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return int(std::max(1u, std::thread::hardware_concurrency()));
}

ObservationMask parse_mask_kind(const std::string& spec, Dims3 dims, std::uint64_t seed) {
  auto pos = spec.find(':');
  std::string kind = spec.substr(0, pos);
  std::string args = pos == std::string::npos ? "" : spec.substr(pos + 1);
  std::istringstream in(args);
  char c;
  if (kind == "uniform") {
    double sr;
    if (!(in >> sr)) throw ConfigError("uniform mask needs :SR");
    return uniform_mask(dims, sr, seed);
  }
  if (kind == "rect") {
    int i0, j0, h, w;
    if (!(in >> i0 >> c >> j0 >> c >> h >> c >> w)) throw ConfigError("rect mask needs :i,j,h,w");
    return rectangle_mask(dims, i0, j0, h, w);
  }
  if (kind == "grid") {
    int period, thickness;
    if (!(in >> period >> c >> thickness)) throw ConfigError("grid mask needs :P,T");
    return grid_mask(dims, period, thickness);
  }
  throw ConfigError("unknown mask kind: " + spec);
}

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (auto b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

int cmd_synth(const SolverFlags& f, int n1, int n2, int n3, int rank, double sr, int runs) {
  std::filesystem::create_directories(f.out_dir);
  SolverConfig cfg = make_config(f);
  PenaltyFunction penalty = parse_penalty(f.penalty);

  std::vector<RunMetrics> results(runs);
  std::vector<std::string> errors(runs);
  std::vector<std::thread> pool;
  std::mutex next_mu;
  int next = 0;
  const int workers = std::min(worker_cap(), runs);
  for (int wi = 0; wi < workers; ++wi) {
    pool.emplace_back([&] {
      for (;;) {
        int idx;
        {
          std::lock_guard<std::mutex> lk(next_mu);
          if (next >= runs) return;
          idx = next++;
        }
        try {
          SynthInstance inst = synth_instance(n1, n2, n3, rank, sr, f.seed + idx);
          std::string trace = f.out_dir + "/trace_run" + std::to_string(idx) + ".csv";
          results[idx] =
              run_one(inst.m_true, inst.mask, cfg, f.preset, penalty, trace, /*gt_stop=*/true);
        } catch (const std::exception& e) {
          errors[idx] = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  json report;
  report["command"] = "synth";
  report["config"] = config_echo(cfg, f);
  report["instance"] = json{{"n1", n1}, {"n2", n2}, {"n3", n3}, {"rank", rank}, {"sr", sr}};
  report["runs"] = json::array();
  double sum_re = 0, sum_re2 = 0, sum_it = 0;
  int ok = 0;
  for (int i = 0; i < runs; ++i) {
    if (!errors[i].empty()) {
      std::cerr << "run " << i << " failed: " << errors[i] << "\n";
      report["runs"].push_back(json{{"run", i}, {"error", errors[i]}});
      continue;
    }
    std::string trace = f.out_dir + "/trace_run" + std::to_string(i) + ".csv";
    json jr = metrics_json(results[i], trace);
    jr["run"] = i;
    jr["seed"] = f.seed + i;
    report["runs"].push_back(jr);
    sum_re += results[i].relerr;
    sum_re2 += results[i].relerr * results[i].relerr;
    sum_it += results[i].iterations;
    ++ok;
  }
  if (ok > 0) {
    double mean = sum_re / ok;
    double var = std::max(0.0, sum_re2 / ok - mean * mean);
    report["aggregate"] = json{{"runs_ok", ok},
                               {"relative_error_mean", mean},
                               {"relative_error_std", std::sqrt(var)},
                               {"iterations_mean", sum_it / ok}};
  }
  std::ofstream(f.out_dir + "/report.json") << report.dump(2) << "\n";
  std::cout << report.dump(2) << "\n";
  for (int i = 0; i < runs; ++i) {
    if (!errors[i].empty()) return 3;
  }
  return 0;
}

int cmd_inpaint(const SolverFlags& f, const std::string& input, const std::string& mask_file,
                const std::string& mask_kind) {
  std::filesystem::create_directories(f.out_dir);
  Tensor3 original = read_tensor_file(input);
  ObservationMask mask =
      !mask_file.empty() ? read_mask_file(mask_file)
                         : parse_mask_kind(mask_kind, original.dims(), f.seed);
  if (!(mask.dims == original.dims())) throw IoError("mask dims do not match input dims");

  SolverConfig cfg = make_config(f);
  PenaltyFunction penalty = parse_penalty(f.penalty);
  std::string trace = f.out_dir + "/trace.csv";
  Tensor3 recovered(1, 1, 1);
  RunMetrics m =
      run_one(original, mask, cfg, f.preset, penalty, trace, /*gt_stop=*/false, &recovered);
  write_tensor_file(f.out_dir + "/recovered.tns3", recovered);

  json report;
  report["command"] = "inpaint";
  report["config"] = config_echo(cfg, f);
  report["input"] = input;
  report["mask"] = json{{"observed", mask.observed_count()},
                        {"sampling_ratio", mask.sampling_ratio()},
                        {"hash", fnv1a(mask.indicator)}};
  report["metrics"] = metrics_json(m, trace);
  report["recovered"] = f.out_dir + "/recovered.tns3";
  std::ofstream(f.out_dir + "/report.json") << report.dump(2) << "\n";
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_compare(const SolverFlags& f, const std::string& input, const std::string& mask_kind,
                const std::vector<std::string>& presets) {
  std::filesystem::create_directories(f.out_dir);
  Tensor3 data = input.empty() ? demo_image() : read_tensor_file(input);
  ObservationMask mask = parse_mask_kind(mask_kind, data.dims(), f.seed);
  SolverConfig cfg = make_config(f);
  PenaltyFunction penalty = parse_penalty(f.penalty);
  const std::uint64_t mask_hash = fnv1a(mask.indicator);

  struct Row {
    std::string preset;
    RunMetrics m;
  };
  std::vector<Row> rows;
  for (const auto& p : presets) {
    std::string trace = f.out_dir + "/trace_" + p.substr(0, p.find(':')) + ".csv";
    rows.push_back({p, run_one(data, mask, cfg, p, penalty, trace, /*gt_stop=*/false)});
  }
  std::vector<int> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[int(i)] = int(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rows[a].m.psnr_db > rows[b].m.psnr_db; });
  std::vector<int> rank(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = int(i) + 1;

  std::ostringstream csv;
  csv << "preset,psnr_db,ssim,relative_error,iterations,seconds,mask_hash,rank\n";
  csv.precision(10);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv << rows[i].preset << ',' << rows[i].m.psnr_db << ',' << rows[i].m.ssim_val << ','
        << rows[i].m.relerr << ',' << rows[i].m.iterations << ',' << rows[i].m.seconds << ','
        << mask_hash << ',' << rank[i] << '\n';
  }
  std::ofstream(f.out_dir + "/compare.csv") << csv.str();
  std::cout << csv.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor completion via weighted spectral penalties"};
  app.require_subcommand(1);

  SolverFlags sf, inf, cf;
  int n1 = 50, n2 = 50, n3 = 50, rank = 5, runs = 1;
  double sr = 0.8;
  auto* synth = app.add_subcommand("synth", "random low-tubal-rank recovery benchmark");
  synth->add_option("--n1", n1);
  synth->add_option("--n2", n2);
  synth->add_option("--n3", n3);
  synth->add_option("--rank", rank, "tubal rank of the ground truth");
  synth->add_option("--sr", sr, "sampling ratio");
  synth->add_option("--runs", runs, "independent runs (seeds seed..seed+runs-1)");
  add_solver_flags(synth, sf);

  std::string in_input, in_mask_file, in_mask_kind = "uniform:0.5";
  auto* inpaint = app.add_subcommand("inpaint", "complete a TNS3 tensor under a mask");
  inpaint->add_option("--input", in_input, "TNS3 input")->required();
  inpaint->add_option("--mask", in_mask_file, "MSK3 mask file");
  inpaint->add_option("--mask-kind", in_mask_kind, "uniform:SR | rect:i,j,h,w | grid:P,T");
  add_solver_flags(inpaint, inf);

  std::string cmp_input, cmp_mask_kind = "uniform:0.5";
  std::vector<std::string> cmp_presets{"tnnr", "tnn"};
  auto* compare = app.add_subcommand("compare", "preset comparison table");
  compare->add_option("--input", cmp_input, "TNS3 input (default: bundled test image)");
  compare->add_option("--mask-kind", cmp_mask_kind, "uniform:SR | rect:i,j,h,w | grid:P,T");
  compare->add_option("--presets", cmp_presets, "presets to run")->delimiter(',');
  add_solver_flags(compare, cf);

  std::string gen_out = "image.tns3";
  auto* gen = app.add_subcommand("gen-image", "write the bundled 64x64x3 rank-4 test image");
  gen->add_option("--out", gen_out, "output TNS3 path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(sf, n1, n2, n3, rank, sr, runs);
    if (inpaint->parsed()) return cmd_inpaint(inf, in_input, in_mask_file, in_mask_kind);
    if (compare->parsed()) return cmd_compare(cf, cmp_input, cmp_mask_kind, cmp_presets);
    if (gen->parsed()) {
      write_tensor_file(gen_out, demo_image());
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
  } catch (const SolverDivergence& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    try {
      e.trace.write_csv("diverged_trace.csv");
      std::cerr << "trace written to diverged_trace.csv\n";
    } catch (...) {
    }
    return 3;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
