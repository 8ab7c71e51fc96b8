#include "binmodel/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "binmodel/error.hpp"

namespace binmodel {

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size()) throw InvalidParameter("R^2: length mismatch");
  if (observed.size() < 2) throw InvalidParameter("R^2 needs at least two points");
  const double mean =
      std::accumulate(observed.begin(), observed.end(), 0.0) / static_cast<double>(observed.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (!(ss_tot > 0.0)) throw UndefinedRSquared("R^2 undefined: observations have zero variance");
  return 1.0 - ss_res / ss_tot;
}

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const NelderMeadOptions& opts) {
  const Eigen::Index n = start.size();
  NelderMeadResult res;
  std::vector<Eigen::VectorXd> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  for (Eigen::Index i = 0; i < n; ++i) simplex[i + 1](i) += opts.initial_step;
  for (Eigen::Index i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<Eigen::Index> order(n + 1);
  auto sort = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s(n + 1);
    std::vector<double> v(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) {
      s[i] = simplex[order[i]];
      v[i] = values[order[i]];
    }
    simplex.swap(s);
    values.swap(v);
  };

  sort();
  while (res.evaluations < opts.max_evaluations) {
    double diameter = 0.0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      diameter = std::max(diameter, (simplex[i] - simplex[0]).lpNorm<Eigen::Infinity>());
    }
    if (values[n] - values[0] <= opts.f_tol * (1.0 + std::abs(values[0])) &&
        diameter <= opts.x_tol) {
      res.converged = true;
      break;
    }
    ++res.iterations;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - simplex[n]);
    const double fr = eval(xr);
    if (fr < values[0]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[n]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else {
      const bool outside = fr < values[n];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (simplex[n] - centroid));
      const double fc = eval(xc);
      if (fc < (outside ? fr : values[n])) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        for (Eigen::Index i = 1; i <= n; ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          values[i] = eval(simplex[i]);
        }
      }
    }
    sort();
    res.best_trace.push_back(values[0]);
  }
  res.x = simplex[0];
  res.value = values[0];
  return res;
}

namespace {

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double p) {
  p = std::clamp(p, 1e-6, 1.0 - 1e-6);
  return std::log(p / (1.0 - p));
}

// Unconstrained coordinates: a logit of the position inside each bound, on a log scale for
// the σ parameters.
struct Reparam {
  FitBounds bounds;
  bool monaural;

  int dims() const { return monaural ? 3 : 2; }

  DetectionParams to_params(const Eigen::VectorXd& u, double dprime_target) const {
    DetectionParams p;
    p.rho_hat = bounds.rho_hat.lo + (bounds.rho_hat.hi - bounds.rho_hat.lo) * logistic(u(0));
    p.sigma_bin = log_map(bounds.sigma_bin, u(1));
    if (monaural) p.sigma_mon = log_map(bounds.sigma_mon, u(2));
    p.dprime_target = dprime_target;
    return p;
  }

  Eigen::VectorXd from_params(const DetectionParams& p) const {
    Eigen::VectorXd u(dims());
    u(0) = logit((p.rho_hat - bounds.rho_hat.lo) / (bounds.rho_hat.hi - bounds.rho_hat.lo));
    u(1) = log_unmap(bounds.sigma_bin, p.sigma_bin);
    if (monaural) u(2) = log_unmap(bounds.sigma_mon, p.sigma_mon.value_or(1.0));
    return u;
  }

  static double log_map(const Interval& b, double u) {
    const double v = std::exp(std::log(b.lo) + (std::log(b.hi) - std::log(b.lo)) * logistic(u));
    return std::clamp(v, b.lo, b.hi);
  }
  static double log_unmap(const Interval& b, double v) {
    return logit((std::log(v) - std::log(b.lo)) / (std::log(b.hi) - std::log(b.lo)));
  }
};

struct PreparedDatum {
  const ExperimentDef* def;
  const ConditionVariant* condition;
  PreparedCondition prepared;
  double y;
};

std::vector<PreparedDatum> prepare_data(std::span<const ExperimentDef> defs,
                                        std::span<const DigitizedDatum> data,
                                        const RunOptions& run) {
  std::vector<const DigitizedDatum*> mine;
  std::vector<const ExperimentDef*> owner;
  for (const auto& d : data) {
    for (const auto& def : defs) {
      if (def.name == d.experiment) {
        mine.push_back(&d);
        owner.push_back(&def);
      }
    }
  }
  std::vector<std::optional<PreparedDatum>> slots(mine.size());
  parallel_for(mine.size(), run.jobs, [&](std::size_t i) {
    const ConditionVariant* c = owner[i]->find_condition(mine[i]->condition);
    if (!c) throw DataError("unknown condition '" + mine[i]->condition + "'");
    slots[i].emplace(PreparedDatum{owner[i], c,
                                   PreparedCondition(owner[i]->build(*c, mine[i]->x), run.filter,
                                                     run.quadrature),
                                   mine[i]->y});
  });
  std::vector<PreparedDatum> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Threshold with failures mapped onto the bracket edges so the objective stays finite.
double predict(const PreparedDatum& d, const DetectionParams& params, const SolverOptions& solver) {
  DetectionParams p = condition_params(params, *d.condition);
  if (d.def->ordinate == Ordinate::DeltaRho) p.sigma_mon.reset();
  try {
    return solve_threshold(d.prepared, p, solver).threshold;
  } catch (const NoThreshold&) {
    return d.prepared.ordinate() == Ordinate::DeltaRho ? d.prepared.max_delta_rho()
                                                       : solver.snr_hi_db + solver.expand_db;
  }
}

FitResult run_fit(const Reparam& rp, const DetectionParams& initial,
                  const std::function<double(const DetectionParams&)>& objective,
                  const FitOptions& opts) {
  const double target = initial.dprime_target;
  auto f = [&](const Eigen::VectorXd& u) { return objective(rp.to_params(u, target)); };

  FitResult fr;
  Eigen::VectorXd x = rp.from_params(initial);
  double best = std::numeric_limits<double>::infinity();
  NelderMeadOptions nm = opts.simplex;
  for (int round = 0; round <= opts.restarts; ++round) {
    nm.max_evaluations = opts.simplex.max_evaluations - fr.evaluations;
    if (nm.max_evaluations <= rp.dims() + 1) break;
    const auto r = nelder_mead(f, x, nm);
    fr.evaluations += r.evaluations;
    fr.iterations += r.iterations;
    fr.converged = r.converged;
    fr.trace.insert(fr.trace.end(), r.best_trace.begin(), r.best_trace.end());
    const bool improved = r.value < best - 1e-14 * (1.0 + std::abs(best));
    if (r.value <= best) {
      best = r.value;
      x = r.x;
    }
    if (!improved && round > 0) break;
    nm.initial_step = std::max(0.05, nm.initial_step * 0.5);
  }
  fr.params = rp.to_params(x, target);
  return fr;
}

}  // namespace

FitResult fit_params(const ExperimentDef& def, std::span<const DigitizedDatum> data,
                     const FitOptions& opts) {
  const auto prepared = prepare_data(std::span(&def, 1), data, opts.run);
  if (prepared.size() < 4) throw DataError("fit needs at least 4 data points for " + def.name);

  const DetectionParams initial = opts.initial.value_or(def.table1_params);
  const Reparam rp{opts.bounds, def.ordinate == Ordinate::SnrDb};
  std::vector<double> obs(prepared.size()), pred(prepared.size());
  for (std::size_t i = 0; i < prepared.size(); ++i) obs[i] = prepared[i].y;

  auto sse = [&](const DetectionParams& p) {
    parallel_for(prepared.size(), opts.run.jobs,
                 [&](std::size_t i) { pred[i] = predict(prepared[i], p, opts.run.solver); });
    double s = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) s += (obs[i] - pred[i]) * (obs[i] - pred[i]);
    return s;
  };

  FitResult fr = run_fit(rp, initial, sse, opts);
  fr.experiment = def.name;
  fr.sse = sse(fr.params);
  fr.r_squared = r_squared(obs, pred);
  fr.n_points = obs.size();
  return fr;
}

FitResult fit_global(std::span<const ExperimentDef> defs, std::span<const DigitizedDatum> data,
                     const FitOptions& opts) {
  const auto prepared = prepare_data(defs, data, opts.run);
  if (prepared.size() < 4) throw DataError("global fit needs at least 4 data points");

  // Per-experiment SST for the normalized objective.
  std::map<const ExperimentDef*, std::pair<double, double>> moments;  // sum, sum of squares
  std::map<const ExperimentDef*, std::size_t> counts;
  for (const auto& d : prepared) {
    moments[d.def].first += d.y;
    moments[d.def].second += d.y * d.y;
    ++counts[d.def];
  }
  std::map<const ExperimentDef*, double> sst;
  for (const auto& [def, m] : moments) {
    const double n = static_cast<double>(counts[def]);
    sst[def] = m.second - m.first * m.first / n;
    if (!(sst[def] > 0.0)) throw UndefinedRSquared("no variance in data for " + def->name);
  }

  DetectionParams initial = opts.initial.value_or(global_params());
  const Reparam rp{opts.bounds, true};
  std::vector<double> pred(prepared.size());
  auto objective = [&](const DetectionParams& p) {
    parallel_for(prepared.size(), opts.run.jobs,
                 [&](std::size_t i) { pred[i] = predict(prepared[i], p, opts.run.solver); });
    double s = 0.0;
    for (std::size_t i = 0; i < prepared.size(); ++i) {
      const double r = prepared[i].y - pred[i];
      s += r * r / sst[prepared[i].def];
    }
    return s;
  };

  FitResult fr = run_fit(rp, initial, objective, opts);
  fr.experiment = "global";
  fr.sse = objective(fr.params);
  std::vector<double> obs, pr;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    if (prepared[i].def->ordinate != Ordinate::SnrDb) continue;
    obs.push_back(prepared[i].y);
    pr.push_back(pred[i]);
  }
  fr.n_points = prepared.size();
  fr.r_squared = obs.size() >= 2 ? r_squared(obs, pr) : std::numeric_limits<double>::quiet_NaN();
  return fr;
}

}  // namespace binmodel
