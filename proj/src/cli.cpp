#include "zetashift/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "zetashift/serialize.hpp"

namespace zetashift::cli {

namespace fs = std::filesystem;
using io::Json;
using io::get;
using io::get_or;

namespace {

struct Options {
  std::string command;
  std::string config;
  std::string out = ".";
  int threads = 1;
  bool paper_defaults = false;
  bool seedless = false;
};

struct Context {
  Options opt;
  Json cfg;
  fs::path config_dir;
  std::string hash;
  std::ostream& out;
};

[[noreturn]] void io_error(const std::string& what) { throw Error(ErrorCode::IoError, what); }

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) io_error("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
}

void write_text(const Context& ctx, const std::string& name, const std::string& text) {
  const fs::path path = fs::path(ctx.opt.out) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) io_error("cannot write " + path.string());
  f << text;
  if (!f) io_error("write failed for " + path.string());
}

void write_json(const Context& ctx, const std::string& name, Json body) {
  body["config_hash"] = ctx.hash;
  write_text(ctx, name, body.dump(2) + "\n");
}

bool is_precondition(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IndependenceViolated:
    case ErrorCode::MarginTooSmall:
    case ErrorCode::OverlapDetected:
    case ErrorCode::NonFinite:
    case ErrorCode::PoleAt1:
    case ErrorCode::OutsideDomain:
      return true;
    default:
      return false;
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path resolve(const Context& ctx, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : ctx.config_dir / path;
}

ScanConfig scan_base(const Context& ctx, const ZSpec& z) {
  ScanConfig sc;
  sc.z = std::make_shared<ZSpecFunction>(z);
  sc.threads = ctx.opt.threads;
  sc.config_hash = ctx.hash;
  return sc;
}

// ---- eval -----------------------------------------------------------------

int cmd_eval(Context& ctx) {
  const auto& c = ctx.cfg;
  io::check_keys(c, {"schema_version", "zspec", "points", "tolerance"}, "config");
  const auto z = io::zspec_from_json(c.at("zspec"));
  EvalConfig ec;
  ec.abs_tolerance = get_or<double>(c, "tolerance", ec.abs_tolerance, "config");
  ec.validate();
  if (!c.contains("points") || !c.at("points").is_array()) {
    throw Error(ErrorCode::SchemaError, "config: 'points' must be an array");
  }
  Json values = Json::array();
  for (std::size_t k = 0; k < c.at("points").size(); ++k) {
    const Complex s = io::complex_from_json(c.at("points")[k], "points[" + std::to_string(k) + "]");
    const auto v = eval_zspec(z, s, ec);
    Json comps = Json::array();
    ctx.out << "s = " << io::format_double(s.real()) << (s.imag() < 0 ? " - " : " + ")
            << io::format_double(std::abs(s.imag())) << "i:";
    for (auto w : v) {
      comps.push_back(io::to_json(w));
      ctx.out << " " << io::format_double(w.real()) << (w.imag() < 0 ? " - " : " + ")
              << io::format_double(std::abs(w.imag())) << "i";
    }
    ctx.out << "\n";
    values.push_back({{"s", io::to_json(s)}, {"value", comps}});
  }
  write_json(ctx, "eval.json", {{"zspec", io::to_json(z)}, {"tolerance", ec.abs_tolerance}, {"values", values}});
  return kExitOk;
}

// ---- fit ------------------------------------------------------------------

int cmd_fit(Context& ctx) {
  const auto& c = ctx.cfg;
  io::check_keys(c, {"schema_version", "zspec", "region", "shift", "max_degree", "bound", "family"}, "config");
  const auto z = io::zspec_from_json(c.at("zspec"));
  const auto K = io::region_from_json(c.at("region"));
  const double shift = get_or<double>(c, "shift", 0.0, "config");
  const int max_degree = get<int>(c, "max_degree", "config");
  const double bound = get<double>(c, "bound", "config");
  const std::size_t arity = z.arity();

  std::vector<std::string> families;
  if (!c.contains("family")) {
    families.assign(arity, "exp");
  } else if (c.at("family").is_string()) {
    families.assign(arity, c.at("family").get<std::string>());
  } else {
    families = get<std::vector<std::string>>(c, "family", "config");
  }
  if (families.size() != arity) {
    throw Error(ErrorCode::InvalidArgument, "family lists " + std::to_string(families.size()) +
                                                " components but Z has " + std::to_string(arity));
  }
  for (std::size_t k = 0; k < arity; ++k) {
    if (families[k] != "exp" && families[k] != "poly") {
      throw Error(ErrorCode::SchemaError, "family must be 'exp' or 'poly'");
    }
    if (k > 0 && families[k] == "exp" && families[k - 1] == "poly") {
      throw Error(ErrorCode::InvalidArgument, "zero-free ('exp') components must come first");
    }
  }

  std::vector<ExpPolynomialTarget> zero_free;
  std::vector<PolynomialTarget> free;
  Json comps = Json::array();
  for (std::size_t k = 0; k < arity; ++k) {
    const auto samples = sample_on_grid(K, [&](Complex s) { return eval_zspec(z, s + Complex(0.0, shift))[k]; });
    Json info{{"component", k}, {"family", families[k]}};
    if (families[k] == "exp") {
      const auto r = fit_exp_polynomial(samples, K, max_degree, bound);
      zero_free.push_back(r.target);
      info.update({{"achieved", r.achieved}, {"degree", r.degree}, {"grid_points", r.grid_points}});
    } else {
      const auto r = fit_polynomial(samples, K, max_degree, bound);
      free.push_back(r.target);
      info.update({{"achieved", r.achieved}, {"degree", r.degree}, {"grid_points", r.grid_points}});
    }
    comps.push_back(info);
  }
  const MixedTarget target(std::move(zero_free), std::move(free));
  write_json(ctx, "fit.json", {{"target", io::to_json(target)}, {"shift", shift}, {"components", comps}});
  ctx.out << "fit " << arity << " component(s) within " << io::format_double(bound) << "\n";
  return kExitOk;
}

// ---- scan -----------------------------------------------------------------

Json scan_summary(const ScanResult& r) {
  Json j{{"grid_points_per_shift", r.grid_points_per_shift},
         {"refined_points", r.refined_points},
         {"max_lipschitz", r.max_lipschitz},
         {"rows", r.rows.size()}};
  if (const auto* d = std::get_if<DiscreteWitnessSet>(&r.witnesses)) {
    j["witnesses"] = io::to_json(*d);
    if (d->window() > 0.0) j["density"] = io::to_json(empirical_density(*d));
  } else {
    const auto& v = r.continuous();
    j["witnesses"] = io::to_json(v);
    if (v.horizon > v.start) j["density"] = io::to_json(empirical_density(v));
  }
  return j;
}

int cmd_scan(Context& ctx) {
  const auto& c = ctx.cfg;
  io::check_keys(c,
                 {"schema_version", "zspec", "target", "region", "epsilon", "mode", "hybrid", "short_interval",
                  "tower", "kind", "independence_height", "tolerance"},
                 "config");
  const auto z = io::zspec_from_json(c.at("zspec"));
  auto sc = scan_base(ctx, z);
  if (c.contains("tolerance")) {
    EvalConfig ec;
    ec.abs_tolerance = get<double>(c, "tolerance", "config");
    sc.z = std::make_shared<ZSpecFunction>(z, ec);
  }
  if (!c.contains("target")) throw Error(ErrorCode::SchemaError, "config: missing 'target'");
  if (!c.contains("region")) throw Error(ErrorCode::SchemaError, "config: missing 'region'");
  sc.target = io::target_from_json(c.at("target"));
  if (sc.target.arity() != sc.z->arity()) {
    throw Error(ErrorCode::SchemaError, "zspec has " + std::to_string(sc.z->arity()) +
                                            " components but target has " + std::to_string(sc.target.arity()));
  }
  sc.region = io::region_from_json(c.at("region"));
  sc.epsilon = get<double>(c, "epsilon", "config");
  sc.independence_height = get_or<int>(c, "independence_height", sc.independence_height, "config");
  if (c.contains("kind")) sc.kind = witness_kind_from_string(get<std::string>(c, "kind", "config"));
  if (c.contains("hybrid")) sc.hybrid = io::hybrid_from_json(c.at("hybrid"), sc.epsilon);

  std::optional<TowerParams> tower;
  if (c.contains("tower")) tower = io::tower_from_json(c.at("tower"));

  if (!c.contains("mode")) throw Error(ErrorCode::SchemaError, "config: missing 'mode'");
  const auto& m = c.at("mode");
  const auto type = get<std::string>(m, "type", "mode");
  if (type == "continuous") {
    io::check_keys(m, {"type", "t_start", "t_end", "step"}, "mode");
    ContinuousMode cm;
    cm.t_start = get_or<double>(m, "t_start", 0.0, "mode");
    cm.t_end = get_or<double>(m, "t_end", 0.0, "mode");
    cm.step = tower ? std::min(tower->delta() / 4.0, 0.05) : 0.05;
    cm.step = get_or<double>(m, "step", cm.step, "mode");
    sc.mode = cm;
  } else if (type == "discrete") {
    io::check_keys(m, {"type", "alpha", "n_start", "n_end"}, "mode");
    DiscreteMode dm;
    dm.alpha = get<double>(m, "alpha", "mode");
    dm.n_start = get_or<std::int64_t>(m, "n_start", 0, "mode");
    dm.n_end = get_or<std::int64_t>(m, "n_end", 0, "mode");
    sc.mode = dm;
  } else {
    throw Error(ErrorCode::SchemaError, "mode: unknown type '" + type + "'");
  }

  ScanResult r;
  Json extra = Json::object();
  if (tower) {
    if (c.contains("short_interval")) {
      throw Error(ErrorCode::InvalidArgument, "short_interval and tower cannot be combined");
    }
    sc.region = build_tower(sc.region, *tower);
    r = scan_tower(sc);
    extra["tower"] = io::to_json(*tower);
  } else if (c.contains("short_interval")) {
    const auto& si = c.at("short_interval");
    io::check_keys(si, {"T", "omega"}, "short_interval");
    const double T = get<double>(si, "T", "short_interval");
    const auto omega = si.contains("omega") ? io::omega_from_json(si.at("omega")) : OmegaSpec::linear();
    r = scan_short_interval(sc, omega, T);
    extra["short_interval"] = {{"T", T}, {"omega_of_T", omega(T)}};
  } else {
    r = scan(sc);
  }
  Json summary = scan_summary(r);
  summary.update(extra);
  write_json(ctx, "scan.json", summary);
  write_text(ctx, "scan.csv", io::scan_csv(r.rows, ctx.hash));
  if (const auto* d = std::get_if<DiscreteWitnessSet>(&r.witnesses)) {
    ctx.out << d->members.size() << " witnesses among " << r.rows.size() << " shifts\n";
  } else {
    ctx.out << "witness measure " << io::format_double(r.continuous().measure()) << " over "
            << r.rows.size() << " evaluated shifts\n";
  }
  return kExitOk;
}

// ---- tower ----------------------------------------------------------------

int cmd_tower(Context& ctx) {
  const auto& c = ctx.cfg;
  io::check_keys(c, {"schema_version", "region", "tower"}, "config");
  if (!c.contains("region") || !c.contains("tower")) {
    throw Error(ErrorCode::SchemaError, "config: needs 'region' and 'tower'");
  }
  const auto K0 = io::region_from_json(c.at("region"));
  const auto p = io::tower_from_json(c.at("tower"));
  const auto K1 = build_tower(K0, p);
  const auto& u = std::get<ShiftedUnion>(K1.shape());
  Json pieces = Json::array();
  for (std::size_t k = 0; k < u.shifts.size(); ++k) {
    pieces.push_back({{"m", u.labels[k].m}, {"l", u.labels[k].l}, {"shift", u.shifts[k]}});
  }
  write_json(ctx, "tower.json", {{"tower", io::to_json(p)}, {"region", io::to_json(K1)}, {"pieces", pieces}});
  ctx.out << pieces.size() << " pieces, M1 = " << io::format_double(p.M1()) << ", L1 = " << p.L1() << "\n";
  return kExitOk;
}

// ---- kronecker ------------------------------------------------------------

int cmd_kronecker(Context& ctx) {
  const auto& c = ctx.cfg;
  io::check_keys(c,
                 {"schema_version", "lambdas", "alpha", "step", "epsilon", "l_cap", "l_max", "height", "targets"},
                 "config");
  const auto lambdas = get<std::vector<double>>(c, "lambdas", "config");
  const double alpha = get_or<double>(c, "alpha", 1.0, "config");
  const auto step = get_or<std::int64_t>(c, "step", 1, "config");
  const int height = get_or<int>(c, "height", 12, "config");
  const auto angles = TorusAngles::from_lambdas(lambdas, alpha, step);
  Json report{{"lambdas", lambdas}, {"alpha", alpha}, {"step", step}, {"thetas", angles.thetas()}};
  const auto indep = independence_check(lambdas, alpha, height);
  report["independence"] = io::to_json(indep);
  if (c.contains("l_cap")) {
    const double eps = get<double>(c, "epsilon", "config");
    report["covering"] = io::to_json(covering_number(angles, eps, get<std::int64_t>(c, "l_cap", "config")));
  }
  if (c.contains("targets")) {
    const double eps = get<double>(c, "epsilon", "config");
    ComplexVec targets;
    for (const auto& t : c.at("targets")) targets.push_back(io::complex_from_json(t, "targets"));
    const auto l = find_shift(angles, targets, eps, get<std::int64_t>(c, "l_max", "config"), ctx.opt.threads);
    report["shift"] = l ? Json(*l) : Json(nullptr);
  }
  write_json(ctx, "kronecker.json", report);
  ctx.out << "independence: " << to_string(indep.verdict) << "\n";
  return kExitOk;
}

// ---- transfer -------------------------------------------------------------

int cmd_transfer(Context& ctx) {
  const auto& c = ctx.cfg;
  io::check_keys(c,
                 {"schema_version", "zspec", "target", "region", "strip", "epsilon", "alpha", "delta0", "hybrid",
                  "horizon", "step", "constants", "l_cap", "independence_height", "witness_samples"},
                 "config");
  const auto z = io::zspec_from_json(c.at("zspec"));
  if (!c.contains("target") || !c.contains("region") || !c.contains("strip")) {
    throw Error(ErrorCode::SchemaError, "config: needs 'target', 'region' and 'strip'");
  }
  const auto g = io::target_from_json(c.at("target"));
  const auto K = io::region_from_json(c.at("region"));
  const auto strip = io::strip_from_json(c.at("strip"));
  const double eps = get<double>(c, "epsilon", "config");
  const double alpha = get<double>(c, "alpha", "config");
  const auto N = get<std::int64_t>(c, "horizon", "config");
  require(eps > 0.0, "epsilon must be positive");
  require(N >= 1, "horizon must be >= 1");
  const auto K0 = enlarge(K, get<double>(c, "delta0", "config"), strip);
  const Rect& K0_rect = std::get<Rect>(K0.shape());
  const double delta0 = distance_to_complement(K, K0_rect);

  std::optional<HybridConstraint> hybrid;
  if (c.contains("hybrid")) hybrid = io::hybrid_from_json(c.at("hybrid"), eps);
  const bool has_hybrid = hybrid && hybrid->size() > 0;

  Json report;
  double delta = 0.0, delta1 = 0.0;
  int M = 0, Nt = 0, L = 0;
  if (ctx.opt.paper_defaults) {
    if (c.contains("constants")) {
      throw Error(ErrorCode::InvalidArgument, "--paper-defaults derives the constants; drop 'constants'");
    }
    const auto mod = continuity_modulus(g, K, K0, eps / 4.0);
    report["continuity_modulus"] = io::to_json(mod);
    delta = mod.delta;
    delta1 = has_hybrid ? lambda_modulus(*hybrid, eps / 4.0, delta) : delta / 2.0;
    M = int(std::floor(alpha / delta)) + 1;
    const Rect box = K0.bounding_box();
    Nt = std::max(1, int(std::ceil(std::max(std::abs(box.t_min), std::abs(box.t_max)) / alpha)));
    if (has_hybrid) {
      const auto indep = independence_check(hybrid->lambdas(), alpha, get_or<int>(c, "independence_height", 12, "config"));
      report["independence"] = io::to_json(indep);
      const std::int64_t L1 = 4LL * M * Nt;
      const auto cover = covering_number(TorusAngles::from_lambdas(hybrid->lambdas(), alpha, L1), eps,
                                         get_or<std::int64_t>(c, "l_cap", 1000000, "config"));
      report["covering"] = io::to_json(cover);
      require(cover.L <= std::numeric_limits<int>::max(), "L does not fit an int");
      L = int(cover.L);
    }
  } else {
    if (!c.contains("constants")) {
      throw Error(ErrorCode::SchemaError, "config: 'constants' is required without --paper-defaults");
    }
    const auto& k = c.at("constants");
    io::check_keys(k, {"delta", "delta1", "M", "N", "L"}, "constants");
    delta = get<double>(k, "delta", "constants");
    delta1 = get<double>(k, "delta1", "constants");
    M = get<int>(k, "M", "constants");
    Nt = get<int>(k, "N", "constants");
    L = get_or<int>(k, "L", 0, "constants");
  }
  const auto tower = TowerParams::make(alpha, M, Nt, L, delta);
  const auto K1 = build_tower(K0, tower);
  // C is only needed for the W horizon; xi are filled in once densities exist.
  const auto provisional = TransferConstants::make(delta0, delta, delta1, tower, 0.0, 0.0, 0.0);

  // V over the tower
  auto vc = scan_base(ctx, z);
  vc.target = g;
  vc.region = K1;
  vc.epsilon = eps;
  const double step = get_or<double>(c, "step", std::min(delta / 4.0, 0.05), "config");
  vc.mode = ContinuousMode{0.0, alpha * double(N + 1), step};
  const auto Vr = scan_tower(vc);
  const auto& V = Vr.continuous();

  // S (and U) at eps/2 on K0
  auto dc = scan_base(ctx, z);
  dc.target = g;
  dc.region = K0;
  dc.epsilon = eps / 2.0;
  dc.mode = DiscreteMode{alpha, 0, N};
  dc.kind = WitnessKind::S;
  dc.independence_height = get_or<int>(c, "independence_height", 12, "config");
  const auto S = scan(dc).discrete();
  std::optional<DiscreteWitnessSet> U;
  if (has_hybrid) {
    auto uc = dc;
    uc.hybrid = HybridConstraint(hybrid->lambdas(), hybrid->targets(), eps / 2.0);
    uc.kind = WitnessKind::U;
    U = scan(uc).discrete();
  }

  // W at eps, far enough for every counting window
  const double reach = std::max(provisional.C + 1.0 + delta, 1.0 + (provisional.C + delta) / alpha);
  auto wc = dc;
  wc.epsilon = eps;
  wc.kind = WitnessKind::W;
  if (has_hybrid) wc.hybrid = *hybrid;
  wc.mode = DiscreteMode{alpha, 0, N + std::int64_t(std::ceil(reach))};
  auto W = scan(wc).discrete();

  const double xi1 = S.density();
  const double xi3 = U ? U->density() : xi1;
  const double xi5 = V.measure_in(0.0, alpha * double(N)) / (alpha * double(N));
  const auto tc = TransferConstants::make(delta0, delta, delta1, tower, xi1, xi3, xi5);

  // 2) -> 1): expand S by delta (U by delta1)
  const auto expanded = neighborhood_expand(S, delta);
  const double span = alpha * double(N);
  Json d2c{{"measured", expanded.measure_in(0.0, span) / span},
           {"bound", tc.xi[1]},
           {"boundary_term", 2.0 * delta / span}};
  d2c["holds"] = d2c["measured"].get<double>() + 2.0 * delta / span >= tc.xi[1];
  report["discrete_to_continuous"] = d2c;
  if (U) {
    const auto ue = neighborhood_expand(*U, delta1);
    Json h{{"measured", ue.measure_in(0.0, span) / span}, {"bound", tc.xi[3]}, {"boundary_term", 2.0 * delta1 / span}};
    h["holds"] = h["measured"].get<double>() + 2.0 * delta1 / span >= tc.xi[3];
    report["hybrid_discrete_to_continuous"] = h;
  }

  // 1) -> 6): map sampled t in V to n and check n in W
  const auto counting = counting_inequality_check(V, W, tc, N);
  const auto samples = get_or<std::size_t>(c, "witness_samples", 256, "config");
  const std::size_t stride = std::max<std::size_t>(1, (V.intervals.size() + samples - 1) / std::max<std::size_t>(samples, 1));
  std::size_t checked = 0, in_w = 0, bracket = 0, tight = 0, kron_failures = 0;
  const HybridConstraint* hp = has_hybrid ? &*hybrid : nullptr;
  for (std::size_t k = 0; samples > 0 && k < V.intervals.size(); k += stride) {
    const double t = 0.5 * (V.intervals[k].lo + V.intervals[k].hi);
    ++checked;
    try {
      const auto w = continuous_to_discrete_witness(t, tc, hp);
      in_w += std::binary_search(W.members.begin(), W.members.end(), w.n);
      bracket += w.within_bracket;
      tight += w.within_tight_bracket;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::KroneckerNotFound) throw;
      ++kron_failures;
    }
  }
  const std::size_t w_count = W.count_in(-1.0, double(N));
  Json c2d{{"sampled", checked},
           {"in_W", in_w},
           {"within_bracket", bracket},
           {"within_tight_bracket", tight},
           {"kronecker_not_found", kron_failures},
           {"W_density", double(w_count) / double(N)},
           {"bound", tc.xi[5]},
           {"boundary", counting.boundary},
           {"boundary_term", double(counting.boundary) / double(N)}};
  c2d["holds"] = double(w_count + counting.boundary) / double(N) >= tc.xi[5];
  report["continuous_to_discrete"] = c2d;
  report["counting"] = io::to_json(counting);
  report["densities"] = {{"S", io::to_json(empirical_density(S))},
                         {"V", io::to_json(empirical_density(V))},
                         {"W", io::to_json(empirical_density(W))}};
  report["horizon"] = N;
  report["step"] = step;
  report["paper_defaults"] = ctx.opt.paper_defaults;

  write_json(ctx, "constants.json", io::to_json(tc));
  write_json(ctx, "V.json", io::to_json(V));
  write_json(ctx, "W.json", io::to_json(W));
  write_json(ctx, "S.json", io::to_json(S));
  if (U) write_json(ctx, "U.json", io::to_json(*U));
  write_text(ctx, "counting.csv", io::counting_csv(counting, ctx.hash));
  write_json(ctx, "transfer.json", report);
  ctx.out << "counting inequalities " << (counting.holds() ? "hold" : "FAIL") << " for j = 0.." << N << "\n";
  return counting.holds() ? kExitOk : kExitFailure;
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(Context& ctx) {
  const auto& c = ctx.cfg;
  io::check_keys(c, {"schema_version", "V", "W", "constants", "N"}, "config");
  const auto vj = read_json(resolve(ctx, get<std::string>(c, "V", "config")));
  const auto wj = read_json(resolve(ctx, get<std::string>(c, "W", "config")));
  const auto kj = read_json(resolve(ctx, get<std::string>(c, "constants", "config")));
  const auto V = io::continuous_from_json(vj, "V");
  const auto W = io::discrete_from_json(wj, "W");
  const auto tc = io::constants_from_json(kj);
  const auto k_hash = get<std::string>(kj, "config_hash", "constants");
  if (V.config_hash != W.config_hash || V.config_hash != k_hash) {
    throw Error(ErrorCode::InvalidArgument, "inputs carry different config hashes (" + V.config_hash + ", " +
                                                W.config_hash + ", " + k_hash + ")");
  }
  const auto N = get<std::int64_t>(c, "N", "config");
  const auto r = counting_inequality_check(V, W, tc, N);
  Json body = io::to_json(r);
  body["input_hash"] = V.config_hash;
  write_json(ctx, "verify.json", body);
  write_text(ctx, "counting.csv", io::counting_csv(r, ctx.hash));
  ctx.out << (r.holds() ? "no violations" : std::to_string(r.literal.violations.size()) + " violations") << "\n";
  return r.holds() ? kExitOk : kExitFailure;
}

// ---- density --------------------------------------------------------------

int cmd_density(Context& ctx) {
  const auto& c = ctx.cfg;
  io::check_keys(c, {"schema_version", "witness"}, "config");
  auto j = read_json(resolve(ctx, get<std::string>(c, "witness", "config")));
  if (j.contains("witnesses")) j = j.at("witnesses");
  const auto type = get<std::string>(j, "type", "witness");
  DensityReport r;
  if (type == "discrete") {
    r = empirical_density(io::discrete_from_json(j, "witness"));
  } else {
    r = empirical_density(io::continuous_from_json(j, "witness"));
  }
  Json body = io::to_json(r);
  body["input_hash"] = get<std::string>(j, "config_hash", "witness");
  write_json(ctx, "density.json", body);
  ctx.out << "density " << io::format_double(r.density) << "\n";
  return kExitOk;
}

int dispatch(Context& ctx) {
  const auto& cmd = ctx.opt.command;
  if (cmd == "eval") return cmd_eval(ctx);
  if (cmd == "fit") return cmd_fit(ctx);
  if (cmd == "scan") return cmd_scan(ctx);
  if (cmd == "tower") return cmd_tower(ctx);
  if (cmd == "kronecker") return cmd_kronecker(ctx);
  if (cmd == "transfer") return cmd_transfer(ctx);
  if (cmd == "verify") return cmd_verify(ctx);
  return cmd_density(ctx);
}

void write_error(const Options& opt, const std::string& code, const std::string& message,
                 std::optional<double> value, int exit_code) {
  std::error_code ec;
  fs::create_directories(opt.out, ec);
  std::ofstream f(fs::path(opt.out) / "error.json", std::ios::binary);
  if (!f) return;
  Json j{{"command", opt.command}, {"error", code}, {"message", message}, {"exit_code", exit_code}};
  if (value) j["value"] = *value;
  f << j.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Numerical experiments on universality of zeta shifts"};
  app.require_subcommand(1);
  for (const char* name : {"eval", "fit", "scan", "tower", "kronecker", "transfer", "verify", "density"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "JSON config file")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--paper-defaults", opt.paper_defaults, "derive the constant chain from the config");
    sub->add_flag("--seedless", opt.seedless, "no randomness (always the case)");
    sub->callback([&opt, name] { opt.command = name; });
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitPrecondition;
  }

  try {
    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (ec) io_error("cannot create " + opt.out + ": " + ec.message());
    fs::remove(fs::path(opt.out) / "error.json", ec);
    Json cfg = read_json(opt.config);
    if (!cfg.is_object()) throw Error(ErrorCode::SchemaError, "config must be a JSON object");
    if (get<int>(cfg, "schema_version", "config") != io::kSchemaVersion) {
      throw Error(ErrorCode::SchemaError, "unsupported schema_version");
    }
    Context ctx{opt, cfg, fs::absolute(opt.config).parent_path(), "", out};
    ctx.hash = io::config_hash(
        Json{{"command", opt.command}, {"config", cfg}, {"paper_defaults", opt.paper_defaults}});
    const int code = dispatch(ctx);
    const Json meta{{"command", opt.command},
                    {"config_hash", ctx.hash},
                    {"exit_code", code},
                    {"threads", opt.threads},
                    {"timestamp", utc_timestamp()}};
    write_text(ctx, "meta.json", meta.dump(2) + "\n");
    return code;
  } catch (const Error& e) {
    const int code = is_precondition(e.code()) ? kExitPrecondition : kExitFailure;
    err << e.what() << "\n";
    write_error(opt, std::string(to_string(e.code())), e.what(), e.value(), code);
    return code;
  } catch (const nlohmann::json::exception& e) {
    err << "SchemaError: " << e.what() << "\n";
    write_error(opt, "SchemaError", e.what(), std::nullopt, kExitPrecondition);
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    write_error(opt, "RuntimeError", e.what(), std::nullopt, kExitFailure);
    return kExitFailure;
  }
}

}  // namespace zetashift::cli
