#include "gw/aligned.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <thread>

namespace gw::aligned {

using config::InfConfig;
using config::Mat3;
using config::Vec3;

AlignedMap ev_sampler(const FramedKnot& k, int n) {
  return [k, n](const std::vector<double>& t) {
    if (static_cast<int>(t.size()) != n)
      throw std::invalid_argument("sampler arity mismatch");
    return knots::evaluate(k, t);
  };
}

FramedConfig act_on_samples(const IntervalFamily& ls,
                            const std::vector<AlignedMap>& phis,
                            const std::vector<double>& t) {
  ls.validate();
  if (ls.size() != phis.size())
    throw std::invalid_argument("act_on_samples: interval/map count mismatch");

  const int n = static_cast<int>(t.size());
  const int k = static_cast<int>(ls.size());

  // block of each time: index of the interval whose open interior holds it
  std::vector<int> block(n, -1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i)
      if (t[j] > ls.intervals[i].first && t[j] < ls.intervals[i].second)
        block[j] = i;

  std::vector<FramedConfig> sub(k);
  std::vector<bool> have(k, false);
  for (int i = 0; i < k; ++i) {
    if (std::none_of(block.begin(), block.end(),
                     [&](int b) { return b == i; }))
      continue;
    std::vector<double> tau(n);
    for (int j = 0; j < n; ++j) tau[j] = ls.inv_clamped(i, t[j]);
    sub[i] = phis[i](tau);
    have[i] = true;
  }

  FramedConfig r;
  r.n = n;
  r.boundary = true;
  r.allocate();
  r.x[0] = {-1, 0, 0};
  r.x[n + 1] = {1, 0, 0};

  for (int j = 0; j < n; ++j) {
    int slot = j + 1;
    if (block[j] >= 0) {
      int i = block[j];
      Vec3 p = sub[i].x[slot];
      double s = ls.scale(i), c = ls.center(i);
      r.x[slot] = {c + s * p.x, s * p.y, s * p.z};
      r.frames[slot] = sub[i].frames[slot];
    } else {
      r.x[slot] = {t[j], 0, 0};
    }
  }

  auto block_of_slot = [&](int slot) {
    return (slot >= 1 && slot <= n) ? block[slot - 1] : -2;
  };
  for (int s = 0; s < r.slots(); ++s)
    for (int q = s + 1; q < r.slots(); ++q) {
      int bs = block_of_slot(s), bq = block_of_slot(q);
      if (bs >= 0 && bs == bq) {
        r.set_u(s, q, sub[bs].uvec(s, q));  // shrinking preserves directions
      } else {
        Vec3 d = r.x[s] - r.x[q];
        if (d.norm() > config::kCollisionDelta)
          r.set_u(s, q, d.normalized());
        else
          r.set_u(s, q, Vec3{-1, 0, 0});  // collide along the positive axis
      }
    }
  return r;
}

AlignedMap act_sampler(const IntervalFamily& ls,
                       const std::vector<AlignedMap>& phis) {
  return [ls, phis](const std::vector<double>& t) {
    return act_on_samples(ls, phis, t);
  };
}

AlignedMap restriction_projection(const AlignedMap& phi, int n) {
  if (n < 1) throw std::invalid_argument("restriction_projection: n >= 1");
  return [phi, n](const std::vector<double>& t) {
    if (static_cast<int>(t.size()) != n - 1)
      throw std::invalid_argument("sampler arity mismatch");
    std::vector<double> ext = t;
    ext.push_back(1.0);
    return config::codegeneracy(n, phi(ext));
  };
}

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double unif(double lo, double hi) {
    double v = (eng() >> 11) * 0x1.0p-53;
    return lo + v * (hi - lo);
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

std::vector<double> random_times(Rng& rng, int n, bool allow_ties = true) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = rng.unif(-0.999, 0.999);
  std::sort(t.begin(), t.end());
  if (allow_ties && n >= 2 && rng.uniform_int(0, 2) == 0) {
    int i = rng.uniform_int(0, n - 2);
    t[i + 1] = t[i];  // aligned face
  }
  return t;
}

InfConfig inf_from_config(const FramedConfig& c) {
  InfConfig d;
  d.n = c.n;
  d.allocate();
  for (int i = 0; i < c.n; ++i) d.frames[i] = c.frames[i + 1];
  for (int i = 0; i < c.n; ++i)
    for (int j = i + 1; j < c.n; ++j)
      d.set_u(i, j, c.uvec(i + 1, j + 1));
  return d;
}

// direct transcription of d^0 = mu o_2 x on the operadic model, kept
// independent of insert_inf for the two-code-paths check
InfConfig operadic_d0_direct(const InfConfig& x) {
  InfConfig r;
  r.n = x.n + 1;
  r.allocate();
  r.frames[0] = Mat3::identity();
  for (int p = 0; p < x.n; ++p) r.frames[p + 1] = x.frames[p];
  for (int q = 1; q < r.n; ++q) r.set_u(0, q, Vec3{-1, 0, 0});
  for (int p = 0; p < x.n; ++p)
    for (int q = p + 1; q < x.n; ++q) r.set_u(p + 1, q + 1, x.uvec(p, q));
  return r;
}

FramedKnot random_knot_for(Rng& rng) {
  return knots::random_knot(rng.eng(), 3 + rng.uniform_int(0, 3));
}

IntervalFamily random_family(Rng& rng, int k) {
  // one interval per equal slot of [-0.9, 0.9], so disjointness is built in
  IntervalFamily fam;
  double w = 1.8 / k;
  for (int i = 0; i < k; ++i) {
    double lo = -0.9 + i * w;
    double a = lo + rng.unif(0.0, w / 3);
    double b = a + rng.unif(w / 10, w / 3);
    fam.intervals.emplace_back(a, b);
  }
  fam.validate();
  return fam;
}

struct CheckDef {
  std::string name;
  double (*fn)(std::uint64_t seed, int max_n);
};

double check_sd_identity(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(1, max_n);
  FramedKnot k = random_knot_for(rng);
  FramedConfig c = knots::evaluate(k, random_times(rng, n));
  double err = 0;
  for (int i = 1; i <= n; ++i) {
    // s_i of the doubled configuration returns the original: both copies of
    // the pair carry identical data
    FramedConfig back = config::codegeneracy(i, config::coface(i, c));
    err = std::max(err, config::max_abs_diff(back, c));
    FramedConfig back2 = config::codegeneracy(i, config::coface(i - 1, c));
    err = std::max(err, config::max_abs_diff(back2, c));
  }
  return err;
}

double check_coface_exchange(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(1, std::max(1, max_n - 2));
  FramedKnot k = random_knot_for(rng);
  FramedConfig c = knots::evaluate(k, random_times(rng, n));
  double err = 0;
  for (int i = 0; i <= n + 1; ++i)
    for (int j = i + 1; j <= n + 2; ++j) {
      FramedConfig lhs = config::coface(j, config::coface(i, c));
      FramedConfig rhs = config::coface(i, config::coface(j - 1, c));
      err = std::max(err, config::max_abs_diff(lhs, rhs));
    }
  return err;
}

double check_codegen_exchange(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(3, std::max(3, max_n));
  FramedKnot k = random_knot_for(rng);
  FramedConfig c = knots::evaluate(k, random_times(rng, n));
  double err = 0;
  for (int i = 1; i <= n - 1; ++i)
    for (int j = i; j <= n - 1; ++j) {
      FramedConfig lhs = config::codegeneracy(j, config::codegeneracy(i, c));
      FramedConfig rhs =
          config::codegeneracy(i, config::codegeneracy(j + 1, c));
      err = std::max(err, config::max_abs_diff(lhs, rhs));
    }
  return err;
}

double check_mixed_identities(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(2, std::max(2, max_n - 1));
  FramedKnot k = random_knot_for(rng);
  FramedConfig c = knots::evaluate(k, random_times(rng, n));
  double err = 0;
  // codegeneracies are 1-based here (s_k = standard s^{k-1}), so the
  // identity cases are i in {k-1, k}
  for (int i = 0; i <= n + 1; ++i)
    for (int k = 1; k <= n + 1; ++k) {
      FramedConfig lhs = config::codegeneracy(k, config::coface(i, c));
      if (i == k || i + 1 == k) {
        err = std::max(err, config::max_abs_diff(lhs, c));
      } else if (i + 1 < k) {
        FramedConfig rhs = config::coface(i, config::codegeneracy(k - 1, c));
        err = std::max(err, config::max_abs_diff(lhs, rhs));
      } else {  // i > k
        FramedConfig rhs = config::coface(i - 1, config::codegeneracy(k, c));
        err = std::max(err, config::max_abs_diff(lhs, rhs));
      }
    }
  return err;
}

double check_operadic_model(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(1, std::max(1, max_n - 2));
  FramedKnot k = random_knot_for(rng);
  InfConfig x = inf_from_config(knots::evaluate(k, random_times(rng, n)));
  double err = 0;
  for (int i = 0; i <= n + 1; ++i)
    for (int j = i + 1; j <= n + 2; ++j) {
      InfConfig lhs = config::coface_inf(j, config::coface_inf(i, x));
      InfConfig rhs = config::coface_inf(i, config::coface_inf(j - 1, x));
      err = std::max(err, config::max_abs_diff(lhs, rhs));
    }
  for (int i = 1; i <= n; ++i) {
    InfConfig back = config::codegeneracy_inf(i, config::coface_inf(i, x));
    err = std::max(err, config::max_abs_diff(back, x));
  }
  err = std::max(err, config::max_abs_diff(config::coface_inf(0, x),
                                           operadic_d0_direct(x)));
  return err;
}

double check_insert_associativity(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(1, std::max(1, max_n - 3));
  int mb = rng.uniform_int(1, 3), md = rng.uniform_int(1, 3);
  FramedConfig a =
      knots::evaluate(random_knot_for(rng), random_times(rng, n));
  InfConfig b = inf_from_config(
      knots::evaluate(random_knot_for(rng), random_times(rng, mb)));
  InfConfig d = inf_from_config(
      knots::evaluate(random_knot_for(rng), random_times(rng, md)));
  int i = rng.uniform_int(1, n);
  int j = rng.uniform_int(1, mb);
  FramedConfig lhs = config::insert(config::insert(a, i, b), i + j - 1, d);
  FramedConfig rhs = config::insert(a, i, config::insert_inf(b, j, d));
  return config::max_abs_diff(lhs, rhs);
}

double check_p_ev(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(1, max_n);
  FramedKnot k = random_knot_for(rng);
  AlignedMap pn = restriction_projection(ev_sampler(k, n), n);
  std::vector<double> t = random_times(rng, n - 1);
  return config::max_abs_diff(pn(t), knots::evaluate(k, t));
}

double check_equivariance(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(1, max_n);
  int kk = rng.uniform_int(1, 2);
  IntervalFamily fam = random_family(rng, kk);
  std::vector<FramedKnot> ks;
  std::vector<AlignedMap> phis;
  for (int i = 0; i < kk; ++i) {
    ks.push_back(random_knot_for(rng));
    phis.push_back(ev_sampler(ks.back(), n));
  }
  std::vector<double> t = random_times(rng, n);
  FramedConfig via_samples = act_on_samples(fam, phis, t);
  FramedConfig via_knots = knots::evaluate(knots::act_on_knots(fam, ks), t);
  return config::max_abs_diff(via_samples, via_knots);
}

double check_projection_action(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(2, max_n);
  int kk = rng.uniform_int(1, 2);
  IntervalFamily fam = random_family(rng, kk);
  std::vector<AlignedMap> phis, proj;
  for (int i = 0; i < kk; ++i) {
    FramedKnot k = random_knot_for(rng);
    phis.push_back(ev_sampler(k, n));
    proj.push_back(restriction_projection(ev_sampler(k, n), n));
  }
  AlignedMap lhs = restriction_projection(act_sampler(fam, phis), n);
  AlignedMap rhs = act_sampler(fam, proj);
  std::vector<double> t = random_times(rng, n - 1);
  return config::max_abs_diff(lhs(t), rhs(t));
}

double check_straight_baseline(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(1, max_n);
  FramedKnot k = knots::straight_knot();
  std::vector<double> t = random_times(rng, n);
  FramedConfig c = knots::evaluate(k, t);
  double err = 0;
  for (int s = 0; s < c.slots(); ++s) {
    double want = s == 0 ? -1.0 : (s == c.slots() - 1 ? 1.0 : t[s - 1]);
    err = std::max(err, (c.x[s] - Vec3{want, 0, 0}).norm());
    Mat3 id;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        err = std::max(err, std::fabs(c.frames[s].a[a][b] - id.a[a][b]));
  }
  for (int s = 0; s < c.slots(); ++s)
    for (int q = s + 1; q < c.slots(); ++q)
      err = std::max(err, (c.uvec(s, q) - Vec3{-1, 0, 0}).norm());
  return err;
}

double check_consistency_chain(std::uint64_t seed, int max_n) {
  Rng rng(seed);
  int n = rng.uniform_int(1, std::max(1, max_n - 1));
  FramedKnot k = random_knot_for(rng);
  FramedConfig c = knots::evaluate(k, random_times(rng, n));
  double err = config::consistency_error(c);
  FramedConfig d = config::coface(rng.uniform_int(0, n + 1), c);
  err = std::max(err, config::consistency_error(d));
  if (d.n >= 2) {
    FramedConfig e = config::codegeneracy(rng.uniform_int(1, d.n), d);
    err = std::max(err, config::consistency_error(e));
  }
  return err;
}

const CheckDef kChecks[] = {
    {"sd_identity", check_sd_identity},
    {"coface_exchange", check_coface_exchange},
    {"codegen_exchange", check_codegen_exchange},
    {"mixed_identities", check_mixed_identities},
    {"operadic_model", check_operadic_model},
    {"insert_associativity", check_insert_associativity},
    {"p_after_ev", check_p_ev},
    {"equivariance", check_equivariance},
    {"projection_action", check_projection_action},
    {"straight_baseline", check_straight_baseline},
    {"consistency_chain", check_consistency_chain},
};

}  // namespace

std::vector<CheckRow> run_config_checks(const CheckOptions& opt) {
  if (opt.samples < 1) throw std::invalid_argument("samples >= 1");
  const std::size_t n_checks = std::size(kChecks);
  std::vector<std::vector<double>> errs(
      n_checks, std::vector<double>(opt.samples, 0.0));

  auto worker = [&](int stripe, int stride) {
    for (int s = stripe; s < opt.samples; s += stride)
      for (std::size_t c = 0; c < n_checks; ++c)
        errs[c][s] = kChecks[c].fn(opt.seed + s, opt.max_n);
  };
  int threads = std::max(1, opt.threads);
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }

  std::vector<CheckRow> rows;
  rows.reserve(n_checks * opt.samples);
  for (std::size_t c = 0; c < n_checks; ++c)
    for (int s = 0; s < opt.samples; ++s)
      rows.push_back({kChecks[c].name, opt.seed + s, errs[c][s]});

  if (opt.knot) {
    // file-supplied knot: run the evaluation-side checks against it
    const FramedKnot& k = *opt.knot;
    Rng rng(opt.seed);
    for (int rep = 0; rep < std::min(opt.samples, 32); ++rep) {
      int n = rng.uniform_int(1, opt.max_n);
      std::vector<double> t = random_times(rng, n);
      FramedConfig c = knots::evaluate(k, t);
      rows.push_back({"knot_consistency", opt.seed + rep,
                      config::consistency_error(c)});
      IntervalFamily fam = random_family(rng, 1);
      FramedConfig via_samples =
          act_on_samples(fam, {ev_sampler(k, n)}, t);
      FramedConfig via_knots =
          knots::evaluate(knots::act_on_knots(fam, {k}), t);
      rows.push_back({"knot_equivariance", opt.seed + rep,
                      config::max_abs_diff(via_samples, via_knots)});
    }
  }
  return rows;
}

std::string checks_to_csv(const std::vector<CheckRow>& rows) {
  std::string out = "check,seed,max_error\n";
  char buf[64];
  for (const CheckRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.max_error);
    out += r.name + "," + std::to_string(r.seed) + "," + buf + "\n";
  }
  return out;
}

}  // namespace gw::aligned
