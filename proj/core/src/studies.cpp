#include "nsfemdg/studies.hpp"

#include <algorithm>
#include <cmath>

namespace nsfemdg {

namespace {

double order(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return 0.0;
  return std::log2(coarse / fine);
}

void require_nested(const std::vector<int>& ns, std::size_t min_size) {
  if (ns.size() < min_size) throw InvalidArgument("study: not enough meshes");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw InvalidArgument("study: mesh sizes must be positive");
    if (i > 0 && (ns[i] <= ns[i - 1] || ns[i] % ns[i - 1] != 0)) {
      throw InvalidArgument("study: each mesh size must be a proper multiple of the previous one");
    }
  }
}

bool strictly_decreasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] < xs[i - 1])) return false;
  }
  return true;
}

struct DensityHistory {
  double dt = 0.0;
  std::vector<Eigen::VectorXd> rho;  // rho[k], k = 0..M
};

DensityHistory density_history(const InitialData& initial, const SchemeParams& params, const Mesh& mesh, double T,
                               const StudyObserver& observer) {
  const Discretization disc(mesh, params);
  DensityHistory out;
  out.dt = disc.dt();
  const State s0 = initial(mesh, params);
  out.rho.push_back(s0.rho.values);
  RunOptions opt;
  opt.T = T;
  opt.keep_states = false;
  run(s0, disc, default_homotopy_settings(params), opt,
      [&](const State& prev, const State& cur, const SolveReport& report) {
        out.rho.push_back(cur.rho.values);
        if (observer) observer(disc, prev, cur, report);
      });
  return out;
}

// Index k with t in ((k-1) dt, k dt], evaluated at an interior point t.
std::size_t level_at(double t, double dt, std::size_t last) {
  const auto k = static_cast<std::size_t>(std::floor(t / dt)) + 1;
  return std::min(k, last);
}

}  // namespace

RatesStudy rates_study(const SmoothVectorField& v, const std::vector<int>& ns, const Box& box, int quad_degree) {
  require_nested(ns, 2);
  RatesStudy out;
  for (int n : ns) {
    const Mesh mesh = build_box_mesh(n, box);
    const InterpolationError err = interpolation_error(v, mesh, quad_degree);
    RatesRow row{n, mesh.h(), err.l2, err.broken_h1, 0.0, 0.0};
    if (!out.rows.empty()) {
      const RatesRow& prev = out.rows.back();
      const double levels = std::log2(prev.h / row.h);
      row.l2_order = order(prev.l2, row.l2) / levels;
      row.h1_order = order(prev.broken_h1, row.broken_h1) / levels;
    }
    out.rows.push_back(row);
  }
  out.pass = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const RatesRow& r = out.rows[i];
    out.pass = out.pass && r.l2_order >= 1.8 && r.l2_order <= 2.2 && r.h1_order >= 0.8 && r.h1_order <= 1.2;
  }
  return out;
}

CauchyStudy cauchy_study(const InitialData& initial, const SchemeParams& params, const Box& box,
                         const std::vector<int>& ns, double T, const StudyObserver& observer) {
  require_nested(ns, 2);
  if (!(T > 0.0)) throw InvalidArgument("cauchy study: T must be positive");
  std::vector<Mesh> meshes;
  std::vector<DensityHistory> hist;
  for (int n : ns) {
    meshes.push_back(build_box_mesh(n, box));
    hist.push_back(density_history(initial, params, meshes.back(), T, observer));
  }

  CauchyStudy out;
  std::vector<double> diffs;
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    const Mesh& fine = meshes[i + 1];
    const std::vector<Index> parent = parent_map(meshes[i], fine);
    const DensityHistory& hc = hist[i];
    const DensityHistory& hf = hist[i + 1];

    // Merge the breakpoints of both time grids on (0, T].
    std::vector<double> cuts{0.0, T};
    for (const DensityHistory* h : {&hc, &hf}) {
      for (std::size_t k = 1; k < h->rho.size(); ++k) {
        const double t = static_cast<double>(k) * h->dt;
        if (t < T) cuts.push_back(t);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double sq = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double len = cuts[j + 1] - cuts[j];
      if (!(len > 0.0)) continue;
      const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
      const Eigen::VectorXd& rc = hc.rho[level_at(mid, hc.dt, hc.rho.size() - 1)];
      const Eigen::VectorXd& rf = hf.rho[level_at(mid, hf.dt, hf.rho.size() - 1)];
      double space = 0.0;
      for (Index e = 0; e < fine.num_elements(); ++e) {
        const double d = rf[e] - rc[parent[static_cast<std::size_t>(e)]];
        space += fine.element(e).volume * d * d;
      }
      sq += len * space;
    }
    out.rows.push_back({ns[i], ns[i + 1], std::sqrt(sq)});
    diffs.push_back(std::sqrt(sq));
  }
  out.pass = strictly_decreasing(diffs);
  return out;
}

SmoothScalarField pdecay_scalar_test() {
  SmoothScalarField f;
  f.value = [](const Vec3& x) { return std::sin(1.3 * x[0] + 0.7 * x[1] - 0.4 * x[2]) + x[0] * x[1] * x[1]; };
  f.gradient = [](const Vec3& x) {
    const double c = std::cos(1.3 * x[0] + 0.7 * x[1] - 0.4 * x[2]);
    return Vec3(1.3 * c + x[1] * x[1], 0.7 * c + 2.0 * x[0] * x[1], -0.4 * c);
  };
  return f;
}

SmoothVectorField pdecay_vector_test() {
  const double pi = std::acos(-1.0);
  SmoothVectorField v;
  v.value = [pi](const Vec3& x) {
    return Vec3(x[2] * std::sin(pi * x[1]), x[0] * std::cos(pi * x[2]) + x[1] * x[1], x[1] * std::sin(pi * x[0]));
  };
  v.jacobian = [pi](const Vec3& x) {
    Mat3 j;
    j << 0.0, pi * x[2] * std::cos(pi * x[1]), std::sin(pi * x[1]),
        std::cos(pi * x[2]), 2.0 * x[1], -pi * x[0] * std::sin(pi * x[2]),
        pi * x[1] * std::cos(pi * x[0]), std::sin(pi * x[0]), 0.0;
    return j;
  };
  return v;
}

PDecayStudy p_decay_study(const InitialData& initial, const SchemeParams& params, const Box& box,
                          const std::vector<int>& ns, double T, const StudyObserver& observer) {
  require_nested(ns, 2);
  const SmoothScalarField phi = pdecay_scalar_test();
  const SmoothVectorField v = pdecay_vector_test();
  PDecayStudy out;
  for (int n : ns) {
    const Mesh mesh = build_box_mesh(n, box);
    const Discretization disc(mesh, params);
    PDecayRow row;
    row.n = n;
    row.h = mesh.h();
    RunOptions opt;
    opt.T = T;
    opt.keep_states = false;
    run(initial(mesh, params), disc, default_homotopy_settings(params), opt,
        [&](const State& prev, const State& cur, const SolveReport& report) {
          if (observer) observer(disc, prev, cur, report);
          // rho^k holds on ((k-1) dt, k dt]; the last interval is cut at T.
          const double w = std::min(cur.time, T) - prev.time;
          const PFunctionals p = p_functional_magnitudes(cur, phi, v, disc);
          row.magnitude.p1 += w * p.p1;
          row.magnitude.p2 += w * p.p2;
          row.magnitude.p3 += w * p.p3;
          row.magnitude.p4 += w * p.p4;
        });
    if (!out.rows.empty()) {
      const PFunctionals& prev = out.rows.back().magnitude;
      const double levels = std::log2(out.rows.back().h / row.h);
      row.order = {order(prev.p1, row.magnitude.p1) / levels, order(prev.p2, row.magnitude.p2) / levels,
                   order(prev.p3, row.magnitude.p3) / levels, order(prev.p4, row.magnitude.p4) / levels};
    }
    out.rows.push_back(row);
  }
  std::vector<double> s1, s2, s3, s4;
  for (const auto& r : out.rows) {
    s1.push_back(r.magnitude.p1);
    s2.push_back(r.magnitude.p2);
    s3.push_back(r.magnitude.p3);
    s4.push_back(r.magnitude.p4);
  }
  out.pass = strictly_decreasing(s1) && strictly_decreasing(s2) && strictly_decreasing(s3) && strictly_decreasing(s4);
  return out;
}

}  // namespace nsfemdg
