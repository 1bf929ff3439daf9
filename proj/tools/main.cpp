#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "currentkit/dual_estimate.hpp"
#include "currentkit/flat_norm.hpp"
#include "currentkit/flatgan.hpp"
#include "currentkit/io.hpp"
#include "currentkit/norms.hpp"
#include "currentkit/svg.hpp"

namespace {

using namespace ck;
namespace fs = std::filesystem;

constexpr const char* kExitDoc =
    "Exit codes: 0 ok, 2 input or schema error, 3 unsupported capability, "
    "4 solver failure, 5 training divergence.";

int thread_cap() {
  const char* e = std::getenv("CURRENTKIT_THREADS");
  int hw = int(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (!e || !*e) return 1;
  int v = std::atoi(e);
  if (v < 1) return 1;
  return std::min(v, hw);
}

// Restarts are split into a fixed number of chunks whose seeds do not depend
// on the thread count, so the result is identical no matter how many workers
// CURRENTKIT_THREADS allows.
ComassEstimate comass_estimate_parallel(const KCovector& w, int restarts, uint64_t seed) {
  int chunks = std::min(8, std::max(1, restarts));
  int per = (restarts + chunks - 1) / chunks;
  std::vector<ComassEstimate> part(static_cast<size_t>(chunks));
  int workers = std::min(thread_cap(), chunks);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
        part[size_t(c)] = comass_estimate(w, per, mix64(seed + 1000 + uint64_t(c)));
    });
  for (auto& th : pool) th.join();
  ComassEstimate best = part[0];
  for (const auto& p : part)
    if (p.value > best.value) best = p;
  return best;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_output(const json& j, const std::string& out) {
  if (out.empty())
    emit(j);
  else
    write_text_file(out, j.dump(2) + "\n");
}

struct AlgebraArgs {
  std::string file, op = "mass", out;
  bool estimate = false;
  int restarts = 24;
  uint64_t seed = 0;
};

int cmd_algebra(const AlgebraArgs& a) {
  json in = read_json_file(a.file);
  json out;
  if (a.op == "mass") {
    KVector v = kvector_from_json(in);
    try {
      out = json{{"op", "mass"}, {"value", mass_exact(v)}, {"exact", true}};
    } catch (const capability_error&) {
      if (!a.estimate) throw;
      MassBounds b = mass_bounds(v, a.restarts, a.seed);
      out = json{{"op", "mass"}, {"lower", b.lower}, {"upper", b.upper}, {"exact", false}};
    }
  } else if (a.op == "comass") {
    KCovector w = kcovector_from_json(in);
    try {
      out = json{{"op", "comass"}, {"value", comass_exact(w)}, {"exact", true}};
    } catch (const capability_error&) {
      if (!a.estimate) throw;
      ComassEstimate e = comass_estimate_parallel(w, a.restarts, a.seed);
      out = json{{"op", "comass"}, {"value", e.value}, {"exact", false},
                 {"note", "lower bound attained by a simple unit covector"}};
    }
  } else if (a.op == "wedge") {
    KVector u = kvector_from_json(in.at("a"));
    KVector v = kvector_from_json(in.at("b"));
    out = json{{"op", "wedge"}, {"result", kvector_to_json(wedge(u, v))}};
  } else if (a.op == "inner") {
    KCovector w = kcovector_from_json(in.at("a"));
    KVector v = kvector_from_json(in.at("b"));
    if (w.d != v.d || w.k != v.k)
      throw schema_error("inner pairing needs matching dimension and grade");
    out = json{{"op", "inner"}, {"value", pair(w, v)}};
  } else {
    throw schema_error("unknown algebra op: " + a.op);
  }
  write_output(out, a.out);
  return 0;
}

Chain chain_from_json(const SimplicialComplex& sc, const json& j, int default_grade) {
  int grade = default_grade;
  json coeffs;
  if (j.is_object()) {
    grade = j.at("grade").get<int>();
    coeffs = j.at("coeffs");
  } else {
    coeffs = j;
  }
  if (grade < 0 || grade > 2) throw schema_error("chain grade must be 0, 1 or 2");
  auto v = coeffs.get<std::vector<double>>();
  if (v.size() != sc.cells[size_t(grade)].size())
    throw schema_error("chain length does not match cell count for its grade");
  return Chain(grade, std::move(v));
}

struct FlatnormArgs {
  std::string file, mode = "exact", out, svg;
  double lambda = 1.0, rho = 10.0, alpha = 1.0;
  int steps = 2000;
  uint64_t seed = 0;
};

int cmd_flatnorm(const FlatnormArgs& a) {
  json in = read_json_file(a.file);
  if (a.mode == "exact") {
    DiscreteCurrent T = current_from_json(in);
    PointFlatNorm r = flat_metric_points(T, a.lambda);
    if (!a.svg.empty()) write_text_file(a.svg, flat_norm_witness_svg(r));
    write_output(point_flat_norm_to_json(r), a.out);
    return 0;
  }
  if (a.mode == "simplicial") {
    SimplicialComplex sc = complex_from_json(in);
    if (!in.contains("chain")) throw schema_error("simplicial input needs a chain");
    Chain t = with_schema_errors("chain", [&] { return chain_from_json(sc, in.at("chain"), 1); });
    if (t.grade != 1) throw capability_error("simplicial flat norm expects an edge chain");
    SimplicialFlatNorm r = flat_norm_simplicial(sc, t, a.lambda);
    if (!a.svg.empty()) write_text_file(a.svg, simplicial_witness_svg(sc, t, r));
    write_output(simplicial_flat_norm_to_json(r), a.out);
    return 0;
  }
  if (a.mode == "dual") {
    DiscreteCurrent T = in.contains("S") ? current_from_json(in.at("S")) - current_from_json(in.at("T"))
                                         : current_from_json(in);
    DualEstimateConfig cfg;
    cfg.lambda = a.lambda;
    cfg.rho = a.rho;
    cfg.alpha = a.alpha;
    cfg.steps = a.steps;
    cfg.seed = a.seed;
    DualEstimateResult r = dual_flat_estimate(T, cfg);
    write_output(json{{"estimate", r.value},
                      {"pairing", r.pairing},
                      {"penalty", r.penalty},
                      {"check_ratio", r.check_ratio},
                      {"steps", cfg.steps},
                      {"seed", cfg.seed}},
                 a.out);
    return 0;
  }
  throw schema_error("unknown flatnorm mode: " + a.mode);
}

struct TrainArgs {
  std::string config, out_dir = "run";
  bool emit_svg = false;
  int k = -1, epochs = -1;
  double lambda = -1.0, rho = -1.0, alpha = -1.0;
  int64_t seed = -1;
};

int cmd_train2d(const TrainArgs& a) {
  TrainConfig cfg = train_config_from_json(read_json_file(a.config));
  if (a.k >= 0) cfg.k = a.k;
  if (a.epochs >= 0) cfg.epochs = a.epochs;
  if (a.lambda >= 0.0) cfg.lambda = a.lambda;
  if (a.rho >= 0.0) cfg.rho = a.rho;
  if (a.alpha >= 0.0) cfg.alpha = a.alpha;
  if (a.seed >= 0) cfg.seed = uint64_t(a.seed);
  cfg.validate();

  DataCurrentSpec data = build_circle_dataset(cfg.data_points, cfg.radius, cfg.seed);
  FlatGanTrainer tr(cfg, data);
  auto log = tr.run(a.out_dir);

  if (a.emit_svg) {
    fs::create_directories(fs::path(a.out_dir) / "panels");
    for (int e = 1; e <= cfg.epochs; ++e) {
      if (e % cfg.checkpoint_every != 0 && e != cfg.epochs) continue;
      std::string stem = "epoch_" + std::to_string(e);
      auto load_csv = [&](const fs::path& p) {
        std::istringstream ss(read_text_file(p));
        std::string line;
        std::getline(ss, line);  // header
        std::vector<std::array<double, 2>> pts;
        while (std::getline(ss, line)) {
          double x, y;
          if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) == 2) pts.push_back({x, y});
        }
        Mat m(2, int(pts.size()));
        for (size_t j = 0; j < pts.size(); ++j) {
          m(0, int(j)) = pts[j][0];
          m(1, int(j)) = pts[j][1];
        }
        return m;
      };
      Mat smp = load_csv(fs::path(a.out_dir) / "samples" / (stem + ".csv"));
      Mat wk = load_csv(fs::path(a.out_dir) / "walk" / (stem + ".csv"));
      write_text_file(fs::path(a.out_dir) / "panels" / (stem + ".svg"),
                      training_panel_svg(data, smp, wk, stem));
    }
  }

  json summary{{"out_dir", a.out_dir}, {"epochs", cfg.epochs}, {"k", cfg.k}, {"seed", cfg.seed}};
  if (!log.empty()) {
    const EpochMetrics& m = log.back();
    summary["E_disc"] = m.e_disc;
    summary["E_gen"] = m.e_gen;
    summary["penalty"] = m.penalty;
    summary["min_dist"] = m.min_dist;
    summary["tangent_alignment"] = m.tangent_alignment;
  }
  emit(summary);
  return 0;
}

struct StokesArgs {
  std::string form, chain, out;
};

int cmd_stokes(const StokesArgs& a) {
  PolynomialForm w = polynomial_form_from_json(read_json_file(a.form));
  json jc = read_json_file(a.chain);
  SimplicialComplex sc = complex_from_json(jc);
  if (!jc.contains("chain")) throw schema_error("chain file needs a chain entry");
  Chain c = with_schema_errors("chain", [&] { return chain_from_json(sc, jc.at("chain"), w.k + 1); });
  if (c.grade != w.k + 1)
    throw schema_error("stokes check needs a chain of grade one higher than the form");
  PolynomialForm dw = exterior_derivative(w);
  double lhs = integrate_over_chain(dw, sc, c, 6);
  double rhs = integrate_over_chain(w, sc, boundary(sc, c), 6);
  write_output(json{{"integral_dw_over_chain", lhs},
                    {"integral_w_over_boundary", rhs},
                    {"difference", lhs - rhs}},
               a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("currentkit: geometric currents, scaled flat norms, and a "
                           "flat-norm-critic generative trainer.\n") +
               kExitDoc};
  app.require_subcommand(1);

  AlgebraArgs aa;
  auto* alg = app.add_subcommand("algebra", "Mass, comass, wedge and pairing of multivectors");
  alg->add_option("input", aa.file, "JSON input file")->required();
  alg->add_option("--op", aa.op, "mass | comass | wedge | inner")->required();
  alg->add_flag("--estimate", aa.estimate, "fall back to bounds when no closed form exists");
  alg->add_option("--restarts", aa.restarts, "multi-start budget for estimates");
  alg->add_option("--seed", aa.seed, "seed for estimate restarts");
  alg->add_option("--out", aa.out, "write the result JSON here instead of stdout");

  FlatnormArgs fa;
  auto* fn = app.add_subcommand("flatnorm", "Scaled flat norm of a current");
  fn->add_option("input", fa.file, "JSON input file")->required();
  fn->add_option("--mode", fa.mode, "exact | simplicial | dual");
  fn->add_option("--lambda", fa.lambda, "scale weighting the unfilled residual");
  fn->add_option("--rho", fa.rho, "constraint penalty weight (dual mode)");
  fn->add_option("--alpha", fa.alpha, "tangential critic weight (dual mode)");
  fn->add_option("--steps", fa.steps, "ascent steps (dual mode)");
  fn->add_option("--seed", fa.seed, "seed (dual mode)");
  fn->add_option("--svg", fa.svg, "write a witness plot to this SVG file");
  fn->add_option("--out", fa.out, "write the result JSON here instead of stdout");

  TrainArgs ta;
  auto* tr = app.add_subcommand("train2d", "Train the generative model on the circle dataset");
  tr->add_option("config", ta.config, "training config JSON")->required();
  tr->add_option("--out", ta.out_dir, "run directory for artifacts");
  tr->add_flag("--emit-svg", ta.emit_svg, "write snapshot panels as SVG");
  tr->add_option("--k", ta.k, "override current grade (0 or 1)");
  tr->add_option("--epochs", ta.epochs, "override epoch count");
  tr->add_option("--lambda", ta.lambda, "override lambda");
  tr->add_option("--rho", ta.rho, "override rho");
  tr->add_option("--alpha", ta.alpha, "override alpha");
  tr->add_option("--seed", ta.seed, "override seed");

  StokesArgs sa;
  auto* st = app.add_subcommand("stokes-check",
                                "Integrate dw over a chain and w over its boundary");
  st->add_option("--form", sa.form, "polynomial form JSON")->required();
  st->add_option("--chain", sa.chain, "simplicial complex + chain JSON")->required();
  st->add_option("--out", sa.out, "write the result JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help and version exit cleanly; bad usage is an input error
  }

  try {
    if (*alg) return cmd_algebra(aa);
    if (*fn) return cmd_flatnorm(fa);
    if (*tr) return cmd_train2d(ta);
    if (*st) return cmd_stokes(sa);
  } catch (const schema_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const capability_error& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const solver_error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 4;
  } catch (const divergence_error& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
