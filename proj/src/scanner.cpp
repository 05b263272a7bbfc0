#include "zetashift/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace zetashift {

double OmegaSpec::operator()(double T) const {
  if (form == Form::Linear) return T;
  if (!(T > 1.0)) return 0.0;
  return std::pow(T, a) * std::pow(std::log(T), b);
}

double OmegaSpec::growth_check(const std::vector<double>& alphas, double t_lo, double t_hi,
                               int samples) const {
  require(t_lo > 0.0 && t_hi >= t_lo && samples >= 2, "bad growth-check grid");
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double t = t_lo * std::pow(t_hi / t_lo, double(k) / (samples - 1));
    const double base = (*this)(t);
    if (!(base > 0.0)) return 0.0;
    for (double alpha : alphas) worst = std::min(worst, (*this)(alpha * t) / base);
  }
  return worst;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  constexpr std::size_t kBlock = 64;
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = count;
  std::exception_ptr failure;
  auto work = [&] {
    for (;;) {
      const std::size_t lo = next.fetch_add(kBlock);
      if (lo >= count) return;
      for (std::size_t i = lo; i < std::min(count, lo + kBlock); ++i) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < failed_at) {
            failed_at = i;
            failure = std::current_exception();
          }
          break;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void ScanConfig::validate() const {
  require(z != nullptr, "scan needs a function Z");
  if (z->arity() != target.arity()) {
    throw Error(ErrorCode::InvalidArgument, "Z has " + std::to_string(z->arity()) +
                                                " components but the target has " +
                                                std::to_string(target.arity()));
  }
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  require(threads >= 1, "threads must be >= 1");
  if (placement == TargetPlacement::Lifted) require(region.is_union(), "lifted target needs a tower");
  double alpha = 1.0;
  if (const auto* c = std::get_if<ContinuousMode>(&mode)) {
    require(std::isfinite(c->t_start) && std::isfinite(c->t_end) && c->t_start <= c->t_end,
            "need t_start <= t_end");
    require(std::isfinite(c->step) && c->step > 0.0, "step must be positive");
    require((c->t_end - c->t_start) / c->step < 1e9, "too many grid points");
  } else {
    const auto& d = std::get<DiscreteMode>(mode);
    require(std::isfinite(d.alpha) && d.alpha > 0.0, "alpha must be positive");
    require(0 <= d.n_start && d.n_start <= d.n_end, "need 0 <= n_start <= n_end");
    alpha = d.alpha;
  }
  if (hybrid && hybrid->size() > 0) {
    const auto report = independence_check(hybrid->lambdas(), alpha, independence_height);
    if (report.verdict == IndependenceVerdict::RelationFound) {
      throw Error(ErrorCode::IndependenceViolated, "log lambda_j satisfy an integer relation");
    }
    if (std::holds_alternative<DiscreteMode>(mode) && !report.rational.empty()) {
      throw Error(ErrorCode::IndependenceViolated,
                  "alpha log lambda_j / pi is rational for lambda index " +
                      std::to_string(report.rational.front().index));
    }
  }
}

namespace {

struct Evaluator {
  const ScanConfig& cfg;
  DistanceProbe probe;

  explicit Evaluator(const ScanConfig& c) : cfg(c), probe(c.region, c.target, c.placement) {}

  // (Z distance, hybrid distance)
  std::pair<double, double> at(double shift) const {
    const double d = probe.sup_distance(*cfg.z, shift);
    const double h = cfg.hybrid ? cfg.hybrid->distance(shift) : 0.0;
    return {d, h};
  }
};

ScanResult scan_discrete(const ScanConfig& cfg, const DiscreteMode& mode) {
  Evaluator eval(cfg);
  const auto count = std::size_t(mode.n_end - mode.n_start + 1);
  std::vector<ScanRow> rows(count);
  parallel_for(count, cfg.threads, [&](std::size_t i) {
    const std::int64_t n = mode.n_start + std::int64_t(i);
    const double shift = double(n) * mode.alpha;
    const auto [d, h] = eval.at(shift);
    rows[i] = {n, shift, d, h, d < cfg.epsilon && h < cfg.epsilon, 0.0, 0};
  });
  DiscreteWitnessSet ws;
  ws.alpha = mode.alpha;
  ws.range_start = mode.n_start;
  ws.horizon = mode.n_end;
  ws.epsilon = cfg.epsilon;
  ws.kind = cfg.kind.value_or(cfg.hybrid ? WitnessKind::U : WitnessKind::S);
  ws.config_hash = cfg.config_hash;
  for (const auto& r : rows) {
    if (r.pass) ws.members.push_back(r.index);
  }
  ws.normalize();
  ScanResult out;
  out.witnesses = std::move(ws);
  out.rows = std::move(rows);
  out.grid_points_per_shift = eval.probe.grid_points();
  return out;
}

ScanResult scan_continuous(const ScanConfig& cfg, const ContinuousMode& mode) {
  Evaluator eval(cfg);
  const double step = mode.step;
  const auto K = std::int64_t(std::floor((mode.t_end - mode.t_start) / step + 1e-9));
  const auto count = std::size_t(K + 1);
  std::vector<double> shift(count), dz(count), dh(count);
  parallel_for(count, cfg.threads, [&](std::size_t k) {
    shift[k] = mode.t_start + double(k) * step;
    std::tie(dz[k], dh[k]) = eval.at(shift[k]);
  });

  const double hybrid_lip = cfg.hybrid ? cfg.hybrid->max_log_lambda() : 0.0;
  std::vector<double> lip(count);
  for (std::size_t k = 0; k < count; ++k) {
    double q = 0.0;
    if (k > 0) q = std::max(q, std::abs(dz[k] - dz[k - 1]) / step);
    if (k + 1 < count) q = std::max(q, std::abs(dz[k + 1] - dz[k]) / step);
    lip[k] = std::max(2.0 * q, hybrid_lip);
  }

  ScanResult out;
  out.grid_points_per_shift = eval.probe.grid_points();
  std::vector<Interval> intervals;
  std::vector<std::size_t> near;
  out.rows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double D = std::max(dz[k], dh[k]);
    const double slack = lip[k] * step / 2.0;
    const bool pass = D < cfg.epsilon - slack;
    out.rows.push_back({std::int64_t(k), shift[k], dz[k], dh[k], pass, lip[k], 0});
    out.max_lipschitz = std::max(out.max_lipschitz, lip[k]);
    if (pass) {
      intervals.push_back({shift[k] - step / 2.0, shift[k] + step / 2.0});
    } else if (std::abs(D - cfg.epsilon) < slack) {
      near.push_back(k);
    }
  }

  // One halving around points within the Lipschitz slack of the threshold.
  struct Sub {
    std::size_t parent;
    double t;
    double dz = 0.0, dh = 0.0;
  };
  std::vector<Sub> subs;
  for (auto k : near) {
    for (double side : {-1.0, 1.0}) {
      const double t = shift[k] + side * step / 4.0;
      if (t >= mode.t_start && t <= mode.t_end) subs.push_back({k, t});
    }
  }
  parallel_for(subs.size(), cfg.threads, [&](std::size_t i) {
    std::tie(subs[i].dz, subs[i].dh) = eval.at(subs[i].t);
  });
  for (const auto& s : subs) {
    const std::size_t k = s.parent;
    const double quarter = step / 4.0;
    const double l = std::max(lip[k], std::max(2.0 * std::abs(s.dz - dz[k]) / quarter, hybrid_lip));
    const double D = std::max(s.dz, s.dh);
    const bool pass = D < cfg.epsilon - l * quarter;
    out.rows.push_back({std::int64_t(k), s.t, s.dz, s.dh, pass, l, 1});
    out.max_lipschitz = std::max(out.max_lipschitz, l);
    if (pass) intervals.push_back({s.t - quarter, s.t + quarter});
  }
  out.refined_points = subs.size();
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const ScanRow& a, const ScanRow& b) { return a.shift < b.shift; });

  ContinuousWitnessSet ws;
  ws.intervals = std::move(intervals);
  ws.start = mode.t_start;
  ws.horizon = mode.t_end;
  ws.epsilon = cfg.epsilon;
  ws.config_hash = cfg.config_hash;
  ws.normalize();
  out.witnesses = std::move(ws);
  return out;
}

}  // namespace

ScanResult scan(const ScanConfig& cfg) {
  cfg.validate();
  if (const auto* c = std::get_if<ContinuousMode>(&cfg.mode)) return scan_continuous(cfg, *c);
  return scan_discrete(cfg, std::get<DiscreteMode>(cfg.mode));
}

ScanResult scan_short_interval(const ScanConfig& cfg, const OmegaSpec& omega, double T) {
  require(std::isfinite(T) && T >= 0.0, "T must be >= 0");
  const double width = omega(T);
  require(std::isfinite(width) && width >= 0.0, "omega(T) must be >= 0");
  ScanConfig local = cfg;
  double alpha = 1.0;
  if (auto* c = std::get_if<ContinuousMode>(&local.mode)) {
    c->t_start = T;
    c->t_end = T + width;
  } else {
    auto& d = std::get<DiscreteMode>(local.mode);
    require(T == std::floor(T), "discrete short intervals start at an integer N");
    alpha = d.alpha;
    d.n_start = std::int64_t(T);
    d.n_end = std::int64_t(std::floor(T + width));
  }
  if (omega.form != OmegaSpec::Form::Linear) {
    if (!(omega.growth_check({alpha, 1.0 / alpha}) > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "omega fails inf omega(alpha t) / omega(t) > 0");
    }
  }
  auto result = scan(local);
  if (auto* ws = std::get_if<DiscreteWitnessSet>(&result.witnesses)) ws->window_length = width;
  return result;
}

ScanResult scan_tower(const ScanConfig& cfg) {
  require(cfg.region.is_union(), "scan_tower needs a tower region");
  require(std::holds_alternative<ContinuousMode>(cfg.mode), "scan_tower runs in continuous mode");
  require(std::isfinite(cfg.epsilon) && cfg.epsilon >= 0.0, "epsilon must be >= 0");
  ScanConfig local = cfg;
  local.placement = TargetPlacement::Lifted;
  local.epsilon = cfg.epsilon / 2.0;
  if (local.epsilon == 0.0) {
    const auto& c = std::get<ContinuousMode>(cfg.mode);
    ContinuousWitnessSet ws;
    ws.start = c.t_start;
    ws.horizon = c.t_end;
    ws.config_hash = cfg.config_hash;
    ScanResult out;
    out.witnesses = std::move(ws);
    return out;
  }
  return scan(local);
}

}  // namespace zetashift
