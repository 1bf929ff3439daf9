#pragma once
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "currentkit/ad.hpp"
#include "currentkit/adam.hpp"
#include "currentkit/errors.hpp"
#include "currentkit/io.hpp"
#include "currentkit/nn.hpp"
#include "currentkit/rng.hpp"

namespace ck {

// Point samples of the target k-current: columns of `points` are the x_i,
// columns of `tangents` the unit tangent at x_i (used when k = 1).
struct DataCurrentSpec {
  Mat points;
  Mat tangents;

  int count() const { return points.cols; }
};

inline DataCurrentSpec build_circle_dataset(int n, double radius, uint64_t /*seed*/) {
  if (n < 1) throw std::invalid_argument("need at least one data point");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  DataCurrentSpec data;
  data.points = Mat(2, n);
  data.tangents = Mat(2, n);
  for (int i = 0; i < n; ++i) {
    double th = 2.0 * M_PI * i / n;
    data.points(0, i) = radius * std::cos(th);
    data.points(1, i) = radius * std::sin(th);
    // counterclockwise unit tangent
    data.tangents(0, i) = -std::sin(th);
    data.tangents(1, i) = std::cos(th);
  }
  return data;
}

struct TrainConfig {
  int k = 1;
  double lambda = 1.0;
  double rho = 10.0;
  double alpha = 1.0;
  int n_critic = 5;
  int batch = 5;
  int epochs = 2000;
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  uint64_t seed = 0;
  double radius = 1.0;
  int data_points = 5;
  bool penalty_at_data_only = true;
  int haar_per_point = 4;
  int checkpoint_every = 500;
  std::vector<int> gen_hidden{250, 250, 250};
  std::vector<int> d0_hidden{100, 100, 100};
  std::vector<int> d1_hidden{100, 100};

  void validate() const {
    if (k != 0 && k != 1) throw std::invalid_argument("k must be 0 or 1");
    if (!(lambda > 0.0) || !(rho >= 0.0) || !(alpha > 0.0))
      throw std::invalid_argument("lambda and alpha must be positive, rho nonnegative");
    if (n_critic < 1 || batch < 1 || epochs < 0 || data_points < 1 || haar_per_point < 1)
      throw std::invalid_argument("counts must be positive");
    if (!(lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
  }
};

inline json train_config_to_json(const TrainConfig& c) {
  return json{{"k", c.k},
              {"lambda", c.lambda},
              {"rho", c.rho},
              {"alpha", c.alpha},
              {"n_critic", c.n_critic},
              {"batch", c.batch},
              {"epochs", c.epochs},
              {"lr", c.lr},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"seed", c.seed},
              {"radius", c.radius},
              {"data_points", c.data_points},
              {"penalty_at_data_only", c.penalty_at_data_only},
              {"haar_per_point", c.haar_per_point},
              {"checkpoint_every", c.checkpoint_every},
              {"gen_hidden", c.gen_hidden},
              {"d0_hidden", c.d0_hidden},
              {"d1_hidden", c.d1_hidden}};
}

inline TrainConfig train_config_from_json(const json& j) {
  return with_schema_errors("train config", [&] {
    TrainConfig c;
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("k", c.k);
    get("lambda", c.lambda);
    get("rho", c.rho);
    get("alpha", c.alpha);
    get("n_critic", c.n_critic);
    get("batch", c.batch);
    get("epochs", c.epochs);
    get("lr", c.lr);
    get("beta1", c.beta1);
    get("beta2", c.beta2);
    get("seed", c.seed);
    get("radius", c.radius);
    get("data_points", c.data_points);
    get("penalty_at_data_only", c.penalty_at_data_only);
    get("haar_per_point", c.haar_per_point);
    get("checkpoint_every", c.checkpoint_every);
    get("gen_hidden", c.gen_hidden);
    get("d0_hidden", c.d0_hidden);
    get("d1_hidden", c.d1_hidden);
    c.validate();
    return c;
  });
}

inline MlpSpec generator_spec(const TrainConfig& c) {
  MlpSpec s;
  s.widths.push_back(6);  // circle embedding output
  for (int w : c.gen_hidden) s.widths.push_back(w);
  s.widths.push_back(2);
  s.hidden = Act::leaky_relu;
  s.leak = 0.01;
  return s;
}

inline MlpSpec critic_scalar_spec(const TrainConfig& c) {
  MlpSpec s;
  s.widths.push_back(2);
  for (int w : c.d0_hidden) s.widths.push_back(w);
  s.widths.push_back(1);
  s.hidden = Act::leaky_relu;
  s.leak = 0.01;
  return s;
}

inline MlpSpec critic_vector_spec(const TrainConfig& c) {
  MlpSpec s;
  s.widths.push_back(2);
  for (int w : c.d1_hidden) s.widths.push_back(w);
  s.widths.push_back(2);
  s.hidden = Act::leaky_relu;
  s.leak = 0.01;
  return s;
}

struct FlatGanModels {
  Mlp gen, d0, d1;

  static FlatGanModels init(const TrainConfig& cfg) {
    FlatGanModels m;
    m.gen = Mlp::init(generator_spec(cfg), mix64(cfg.seed + 101));
    m.d0 = Mlp::init(critic_scalar_spec(cfg), mix64(cfg.seed + 202));
    if (cfg.k >= 1) m.d1 = Mlp::init(critic_vector_spec(cfg), mix64(cfg.seed + 303));
    return m;
  }
};

// Latent law: z1 uniform on [-pi, pi], remaining coordinates standard normal.
inline Mat sample_latent(Rng& rng, int latent_dim, int batch) {
  Mat z(latent_dim, batch);
  for (int j = 0; j < batch; ++j) {
    z(0, j) = rng.uniform(-M_PI, M_PI);
    for (int i = 1; i < latent_dim; ++i) z(i, j) = rng.normal();
  }
  return z;
}

// Circle-embedding head then the dense stack: z (5 x B) -> (cos z1, sin z1,
// z2..z5) (6 x B) -> network -> R^2.
inline Var generator_apply(Tape& t, const MlpSpec& spec, const MlpVars& vars, Var z) {
  Var z1 = t.slice_rows(z, 0, 1);
  Var head = t.vstack(t.vstack(t.cosine(z1), t.sine(z1)), t.slice_rows(z, 1, 4));
  return mlp_apply(t, spec, vars, head);
}

inline Mat generator_forward(const Mlp& gen, const Mat& z) {
  Mat head(6, z.cols);
  for (int j = 0; j < z.cols; ++j) {
    head(0, j) = std::cos(z(0, j));
    head(1, j) = std::sin(z(0, j));
    for (int i = 1; i < 5; ++i) head(1 + i, j) = z(i, j);
  }
  return mlp_forward(gen, head);
}

// The critic's action on a point batch with per-column tangent vectors:
// omega0(x) for k = 0, omega0(x) + alpha * <omega1(x), v> for k = 1.
// Returns a 1 x B row.
struct OmegaGraph {
  Var o0;  // 1 x B
  Var o1;  // 2 x B, only when k = 1
};

inline OmegaGraph omega_forward(Tape& t, int k, const MlpSpec& s0, const MlpVars& v0,
                                const MlpSpec& s1, const MlpVars& v1, Var x) {
  OmegaGraph g;
  g.o0 = mlp_apply(t, s0, v0, x);
  if (k >= 1) g.o1 = mlp_apply(t, s1, v1, x);
  return g;
}

inline Var omega_pair(Tape& t, int k, double alpha, const OmegaGraph& g, Var tangents) {
  if (k == 0) return g.o0;
  return t.add(g.o0, t.scale(t.sum_rows(t.mul(g.o1, tangents)), alpha));
}

struct PenaltyParams {
  int k = 0;
  double lambda = 1.0;
  double alpha = 1.0;
  int haar_per_point = 4;
};

// Soft penalty enforcing the scaled-flat-norm dual constraints at the given
// points: |<omega(x), v>| <= lambda over Haar unit k-vectors, and
// |d omega(x; v)| <= 1 over Haar (k+1)-frames, where the latter is realized
// as (k+1)*||grad omega0(x)|| plus the alternating directional-derivative
// sum of the vector part. Mean over points and draws, without the rho factor.
inline Var omega_penalty(Tape& t, const PenaltyParams& cfg, const MlpSpec& s0, const MlpVars& v0,
                         const MlpSpec& s1, const MlpVars& v1, Var x, Rng& haar) {
  int n = t.val(x).cols;
  OmegaGraph g = omega_forward(t, cfg.k, s0, v0, s1, v1, x);

  Var lam_row = t.constant([&] {
    Mat m(1, n);
    for (double& q : m.a) q = cfg.lambda;
    return m;
  }());
  Var one_row = t.constant([&] {
    Mat m(1, n);
    for (double& q : m.a) q = 1.0;
    return m;
  }());

  // gradient of the scalar part, column per point
  Var gx = grad(t, t.sum_all(g.o0), {x})[0];
  Var gnormsq = t.sum_rows(t.mul(gx, gx));
  Var tiny = t.constant([&] {
    Mat m(1, n);
    for (double& q : m.a) q = 1e-18;
    return m;
  }());
  Var gnorm = t.sqrt(t.add(gnormsq, tiny));

  Var comass_pen, deriv_pen;
  if (cfg.k == 0) {
    // both constraints are direction-free: |omega0(x)| <= lambda and
    // ||grad omega0(x)|| <= 1
    Var e0 = t.relu(t.sub(t.abs(g.o0), lam_row));
    comass_pen = t.mean_all(t.mul(e0, e0));
    Var e1 = t.relu(t.sub(gnorm, one_row));
    deriv_pen = t.mean_all(t.mul(e1, e1));
  } else {
    int d = t.val(x).rows;
    for (int draw = 0; draw < cfg.haar_per_point; ++draw) {
      Mat V(d, n);
      for (int j = 0; j < n; ++j) V.set_col(j, haar_frame(haar, d, 1).col(0));
      Var val = omega_pair(t, cfg.k, cfg.alpha, g, t.constant(V));
      Var e = t.relu(t.sub(t.abs(val), lam_row));
      Var p = t.mean_all(t.mul(e, e));
      comass_pen = comass_pen.ok() ? t.add(comass_pen, p) : p;
    }
    comass_pen = t.scale(comass_pen, 1.0 / cfg.haar_per_point);

    for (int draw = 0; draw < cfg.haar_per_point; ++draw) {
      Mat V1(d, n), V2(d, n);
      for (int j = 0; j < n; ++j) {
        Mat f = haar_frame(haar, d, 2);
        V1.set_col(j, f.col(0));
        V2.set_col(j, f.col(1));
      }
      Var v1c = t.constant(V1), v2c = t.constant(V2);
      // <d omega1, v1 ^ v2> = d_{v1}<omega1, v2> - d_{v2}<omega1, v1>
      Var q2 = t.sum_rows(t.mul(g.o1, v2c));
      Var q1 = t.sum_rows(t.mul(g.o1, v1c));
      Var alt = t.sub(jvp(t, q2, x, V1), jvp(t, q1, x, V2));
      Var combined = t.add(t.scale(gnorm, double(cfg.k + 1)), t.scale(t.abs(alt), cfg.alpha));
      Var e = t.relu(t.sub(combined, one_row));
      Var p = t.mean_all(t.mul(e, e));
      deriv_pen = deriv_pen.ok() ? t.add(deriv_pen, p) : p;
    }
    deriv_pen = t.scale(deriv_pen, 1.0 / cfg.haar_per_point);
  }
  return t.add(comass_pen, deriv_pen);
}

struct EpochMetrics {
  int epoch = 0;
  double e_disc = 0.0;
  double e_gen = 0.0;
  double penalty = 0.0;
  double min_dist = 0.0;
  double tangent_alignment = 0.0;
};

// Alternating optimization of the neural scaled-flat-norm distance between
// the pushforward of the latent circle current and the data current.
class FlatGanTrainer {
 public:
  FlatGanTrainer(TrainConfig cfg, DataCurrentSpec data)
      : cfg_(cfg),
        data_(std::move(data)),
        models_(FlatGanModels::init(cfg)),
        opt_d_({cfg.lr, cfg.beta1, cfg.beta2, 1e-8}),
        opt_g_({cfg.lr, cfg.beta1, cfg.beta2, 1e-8}),
        root_(cfg.seed),
        rng_latent_(root_.stream(1)),
        rng_haar_(root_.stream(2)),
        rng_metrics_(root_.stream(3)) {
    cfg_.validate();
    if (data_.points.cols != cfg_.data_points || data_.points.rows != 2)
      throw std::invalid_argument("data shape does not match config");
  }

  const TrainConfig& config() const { return cfg_; }
  const FlatGanModels& models() const { return models_; }
  FlatGanModels& models() { return models_; }
  const DataCurrentSpec& data() const { return data_; }

  // One ascent step on E - rho * penalty for the critic. Returns the E and
  // penalty values seen by this step.
  std::pair<double, double> critic_step() {
    Mat z = sample_latent(rng_latent_, 5, cfg_.batch);
    Tape t;
    auto [E, pen, dvars, gvars] = build_loss(t, z);
    (void)gvars;
    Var loss = t.sub(t.scale(pen, cfg_.rho), E);
    auto wrt = dvars;
    auto gs = grad(t, loss, wrt);
    std::vector<Mat*> ps = critic_params();
    std::vector<Mat> gm;
    gm.reserve(gs.size());
    for (Var g : gs) gm.push_back(t.val(g));
    opt_d_.step(ps, gm);
    double Ev = t.val(E)(0, 0), Pv = t.val(pen)(0, 0);
    check_finite(Ev, Pv);
    return {Ev, Pv};
  }

  // One descent step on E for the generator. Returns E.
  double generator_step() {
    Mat z = sample_latent(rng_latent_, 5, cfg_.batch);
    Tape t;
    auto [E, pen, dvars, gvars] = build_loss(t, z, /*need_penalty=*/false);
    (void)pen;
    (void)dvars;
    auto gs = grad(t, E, gvars);
    std::vector<Mat*> ps = generator_params();
    std::vector<Mat> gm;
    gm.reserve(gs.size());
    for (Var g : gs) gm.push_back(t.val(g));
    opt_g_.step(ps, gm);
    double Ev = t.val(E)(0, 0);
    check_finite(Ev, 0.0);
    return Ev;
  }

  EpochMetrics run_epoch(int epoch_index) {
    EpochMetrics m;
    m.epoch = epoch_index;
    for (int c = 0; c < cfg_.n_critic; ++c) {
      auto [E, P] = critic_step();
      m.e_disc = E;
      m.penalty = P;
    }
    m.e_gen = generator_step();
    m.min_dist = mean_min_dist(128, rng_metrics_);
    m.tangent_alignment = cfg_.k >= 1 ? tangent_alignment(128) : 0.0;
    return m;
  }

  // Full run with artifacts; see run directory layout in the README.
  std::vector<EpochMetrics> run(const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "checkpoints");
    fs::create_directories(out_dir / "samples");
    fs::create_directories(out_dir / "walk");
    write_text_file(out_dir / "config.json", train_config_to_json(cfg_).dump(2) + "\n");

    std::vector<EpochMetrics> log;
    std::string csv = "epoch,E_disc,E_gen,penalty,min_dist,tangent_alignment\n";
    for (int e = 1; e <= cfg_.epochs; ++e) {
      EpochMetrics m = run_epoch(e);
      log.push_back(m);
      char line[256];
      std::snprintf(line, sizeof line, "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", m.epoch, m.e_disc,
                    m.e_gen, m.penalty, m.min_dist, m.tangent_alignment);
      csv += line;
      if (e % cfg_.checkpoint_every == 0 || e == cfg_.epochs) save_snapshot(out_dir, e);
    }
    write_text_file(out_dir / "metrics.csv", csv);
    return log;
  }

  // Generated points: fresh latent draws through the current generator.
  Mat sample_points(int n, Rng& rng) const {
    Mat z = sample_latent(rng, 5, n);
    return generator_forward(models_.gen, z);
  }

  // Image of (t, 0, 0, 0, 0) for t on a uniform closed grid over [-pi, pi].
  Mat latent_walk(int grid) const {
    Mat z(5, grid);
    for (int j = 0; j < grid; ++j) z(0, j) = -M_PI + 2.0 * M_PI * j / (grid - 1);
    return generator_forward(models_.gen, z);
  }

  double mean_min_dist(int n, Rng& rng) const {
    Mat pts = sample_points(n, rng);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < data_.count(); ++i) {
        double dx = pts(0, j) - data_.points(0, i);
        double dy = pts(1, j) - data_.points(1, i);
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
      }
      acc += best;
    }
    return acc / n;
  }

  double mean_min_dist(int n, uint64_t seed) const {
    Rng rng(seed);
    return mean_min_dist(n, rng);
  }

  // Cosine similarity between the first latent velocity and the specified
  // tangent, at the walk point nearest each data sample.
  double tangent_alignment(int grid) const {
    Mat z(5, grid);
    for (int j = 0; j < grid; ++j) z(0, j) = -M_PI + 2.0 * M_PI * j / (grid - 1);
    Mat img = generator_forward(models_.gen, z);

    Mat znear(5, data_.count());
    for (int i = 0; i < data_.count(); ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int j = 0; j < grid; ++j) {
        double dx = img(0, j) - data_.points(0, i);
        double dy = img(1, j) - data_.points(1, i);
        double dd = dx * dx + dy * dy;
        if (dd < bd) {
          bd = dd;
          best = j;
        }
      }
      znear.set_col(i, z.col(best));
    }

    Tape t;
    MlpVars gv = push_params(t, models_.gen);
    Var zin = t.input(znear);
    Var y = generator_apply(t, generator_spec(cfg_), gv, zin);
    Mat dir(5, data_.count());
    for (int i = 0; i < data_.count(); ++i) dir(0, i) = 1.0;
    Mat vel = t.val(jvp(t, y, zin, dir));

    double acc = 0.0;
    for (int i = 0; i < data_.count(); ++i) {
      double vx = vel(0, i), vy = vel(1, i);
      double tx = data_.tangents(0, i), ty = data_.tangents(1, i);
      double nv = std::sqrt(vx * vx + vy * vy), nt = std::sqrt(tx * tx + ty * ty);
      if (nv < 1e-15 || nt < 1e-15) continue;
      acc += (vx * tx + vy * ty) / (nv * nt);
    }
    return acc / data_.count();
  }

  void save_snapshot(const std::filesystem::path& out_dir, int epoch) const {
    std::vector<double> buf = flatten(models_.gen);
    std::vector<double> b0 = flatten(models_.d0);
    buf.insert(buf.end(), b0.begin(), b0.end());
    size_t d1_size = 0;
    if (cfg_.k >= 1) {
      std::vector<double> b1 = flatten(models_.d1);
      d1_size = b1.size();
      buf.insert(buf.end(), b1.begin(), b1.end());
    }
    std::string stem = "epoch_" + std::to_string(epoch);
    write_doubles(out_dir / "checkpoints" / (stem + ".bin"), buf);
    json manifest{{"epoch", epoch},
                  {"gen_widths", generator_spec(cfg_).widths},
                  {"d0_widths", critic_scalar_spec(cfg_).widths},
                  {"d1_widths", cfg_.k >= 1 ? critic_vector_spec(cfg_).widths : std::vector<int>{}},
                  {"gen_params", flatten(models_.gen).size()},
                  {"d0_params", flatten(models_.d0).size()},
                  {"d1_params", d1_size}};
    write_text_file(out_dir / "checkpoints" / (stem + ".json"), manifest.dump(2) + "\n");

    Rng rng(mix64(cfg_.seed + 7000 + epoch));
    Mat pts = sample_points(256, rng);
    std::string csv = "x,y\n";
    for (int j = 0; j < pts.cols; ++j) {
      char line[96];
      std::snprintf(line, sizeof line, "%.12g,%.12g\n", pts(0, j), pts(1, j));
      csv += line;
    }
    write_text_file(out_dir / "samples" / (stem + ".csv"), csv);

    Mat walk = latent_walk(201);
    csv = "x,y\n";
    for (int j = 0; j < walk.cols; ++j) {
      char line[96];
      std::snprintf(line, sizeof line, "%.12g,%.12g\n", walk(0, j), walk(1, j));
      csv += line;
    }
    write_text_file(out_dir / "walk" / (stem + ".csv"), csv);
  }

  // Exposed so tests can replay a single step against independent code.
  Rng& latent_rng() { return rng_latent_; }
  Rng& haar_rng() { return rng_haar_; }
  Adam& critic_optimizer() { return opt_d_; }

  std::vector<Mat*> critic_params() {
    std::vector<Mat*> ps;
    for (auto& w : models_.d0.W) ps.push_back(&w);
    for (auto& b : models_.d0.b) ps.push_back(&b);
    if (cfg_.k >= 1) {
      for (auto& w : models_.d1.W) ps.push_back(&w);
      for (auto& b : models_.d1.b) ps.push_back(&b);
    }
    return ps;
  }
  std::vector<Mat*> generator_params() {
    std::vector<Mat*> ps;
    for (auto& w : models_.gen.W) ps.push_back(&w);
    for (auto& b : models_.gen.b) ps.push_back(&b);
    return ps;
  }

 private:
  struct LossParts {
    Var E, penalty;
    std::vector<Var> critic_vars, gen_vars;
  };

  LossParts build_loss(Tape& t, const Mat& z, bool need_penalty = true) {
    MlpVars gv = push_params(t, models_.gen);
    MlpVars v0 = push_params(t, models_.d0);
    MlpVars v1;
    MlpSpec s1;
    if (cfg_.k >= 1) {
      v1 = push_params(t, models_.d1);
      s1 = critic_vector_spec(cfg_);
    }
    MlpSpec s0 = critic_scalar_spec(cfg_);
    MlpSpec gs = generator_spec(cfg_);

    // data side
    Var xdata = t.input(data_.points);
    OmegaGraph gd = omega_forward(t, cfg_.k, s0, v0, s1, v1, xdata);
    Var data_term =
        t.mean_all(omega_pair(t, cfg_.k, cfg_.alpha, gd, t.constant(data_.tangents)));

    // generator side
    Var zin = t.input(z);
    Var y = generator_apply(t, gs, gv, zin);
    OmegaGraph gg = omega_forward(t, cfg_.k, s0, v0, s1, v1, y);
    Var gen_term;
    if (cfg_.k == 0) {
      gen_term = t.mean_all(gg.o0);
    } else {
      Mat e1(5, z.cols);
      for (int j = 0; j < z.cols; ++j) e1(0, j) = 1.0;
      Var tangent = jvp(t, y, zin, e1);
      gen_term = t.mean_all(omega_pair(t, cfg_.k, cfg_.alpha, gg, tangent));
    }

    LossParts out;
    out.E = t.sub(gen_term, data_term);
    if (need_penalty) {
      PenaltyParams pp{cfg_.k, cfg_.lambda, cfg_.alpha, cfg_.haar_per_point};
      Var pd = omega_penalty(t, pp, s0, v0, s1, v1, xdata, rng_haar_);
      if (cfg_.penalty_at_data_only) {
        out.penalty = pd;
      } else {
        // union of data and current generated batch, weighted like one big mean
        Var pg = omega_penalty(t, pp, s0, v0, s1, v1, y, rng_haar_);
        int n = data_.count(), nb = t.val(y).cols;
        out.penalty = t.add(t.scale(pd, double(n) / (n + nb)),
                            t.scale(pg, double(nb) / (n + nb)));
      }
    } else {
      out.penalty = t.scalar(0.0);
    }
    out.critic_vars = v0.all();
    if (cfg_.k >= 1) {
      auto extra = v1.all();
      out.critic_vars.insert(out.critic_vars.end(), extra.begin(), extra.end());
    }
    out.gen_vars = gv.all();
    return out;
  }

  static void check_finite(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b))
      throw divergence_error("training loss became non-finite");
  }

  TrainConfig cfg_;
  DataCurrentSpec data_;
  FlatGanModels models_;
  Adam opt_d_, opt_g_;
  Rng root_, rng_latent_, rng_haar_, rng_metrics_;
};

}  // namespace ck
