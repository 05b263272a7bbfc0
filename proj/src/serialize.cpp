#include "zetashift/serialize.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace zetashift::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) schema(where + ": missing '" + key + "'");
  return j.at(key);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema(where + ": expected a number");
  return j.get<double>();
}

ComplexVec complex_list(const Json& j, const std::string& where) {
  if (!j.is_array()) schema(where + ": expected an array");
  ComplexVec out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(complex_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Json complex_list(const ComplexVec& v) {
  Json out = Json::array();
  for (auto z : v) out.push_back(to_json(z));
  return out;
}

}  // namespace

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) schema(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) schema(where + ": unknown key '" + key + "'");
  }
}

std::string config_hash(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema(where + ": expected a number or [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const ZSpec& z) {
  Json out;
  switch (z.kind()) {
    case ZSpec::Kind::Riemann:
      out["kind"] = "riemann";
      break;
    case ZSpec::Kind::Hurwitz:
      out["kind"] = "hurwitz";
      out["beta"] = z.beta();
      break;
    case ZSpec::Kind::Ratio:
      out["kind"] = "ratio";
      out["num"] = to_json(z.children()[0]);
      out["den"] = to_json(z.children()[1]);
      out["map"] = {{"scale", z.map().scale}, {"offset", z.map().offset}};
      break;
    case ZSpec::Kind::Product:
    case ZSpec::Kind::Tuple: {
      Json parts = Json::array();
      for (const auto& c : z.children()) parts.push_back(to_json(c));
      const bool product = z.kind() == ZSpec::Kind::Product;
      out["kind"] = product ? "product" : "tuple";
      out[product ? "factors" : "components"] = parts;
      break;
    }
  }
  return out;
}

ZSpec zspec_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) schema(where + ": expected an object");
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "riemann") {
    check_keys(j, {"kind"}, where);
    return ZSpec::riemann();
  }
  if (kind == "hurwitz") {
    check_keys(j, {"kind", "beta"}, where);
    return ZSpec::hurwitz(get<double>(j, "beta", where));
  }
  if (kind == "ratio") {
    check_keys(j, {"kind", "num", "den", "map"}, where);
    AffineMap map;
    if (j.contains("map")) {
      const auto& m = j.at("map");
      check_keys(m, {"scale", "offset"}, where + ".map");
      map.scale = get_or<double>(m, "scale", 1.0, where + ".map");
      map.offset = get_or<double>(m, "offset", 0.0, where + ".map");
    }
    auto num = zspec_from_json(member(j, "num", where), where + ".num");
    if (!j.contains("den")) return ZSpec::ratio(std::move(num), map);
    auto den = zspec_from_json(j.at("den"), where + ".den");
    return ZSpec::ratio(std::move(num), std::move(den), map);
  }
  if (kind == "product" || kind == "tuple") {
    const char* key = kind == "product" ? "factors" : "components";
    check_keys(j, {"kind", key}, where);
    const auto& list = member(j, key, where);
    if (!list.is_array() || list.empty()) schema(where + ": '" + key + "' must be a nonempty array");
    std::vector<ZSpec> parts;
    for (std::size_t k = 0; k < list.size(); ++k) {
      parts.push_back(zspec_from_json(list[k], where + "." + key + "[" + std::to_string(k) + "]"));
    }
    return kind == "product" ? ZSpec::product(std::move(parts)) : ZSpec::tuple(std::move(parts));
  }
  schema(where + ": unknown kind '" + kind + "'");
}

Json to_json(const PolynomialTarget& p) {
  return {{"center", to_json(p.center())}, {"coefficients", complex_list(p.coefficients())}};
}

PolynomialTarget polynomial_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"center", "coefficients"}, where);
  const Complex c = j.contains("center") ? complex_from_json(j.at("center"), where + ".center") : Complex(0.0);
  auto coeffs = complex_list(member(j, "coefficients", where), where + ".coefficients");
  if (coeffs.empty()) schema(where + ": coefficients must be nonempty");
  return PolynomialTarget(c, std::move(coeffs));
}

Json to_json(const MixedTarget& t) {
  Json zf = Json::array(), fr = Json::array();
  for (const auto& g : t.zero_free()) zf.push_back(to_json(g.exponent()));
  for (const auto& p : t.free()) fr.push_back(to_json(p));
  return {{"zero_free", zf}, {"free", fr}};
}

MixedTarget target_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"zero_free", "free"}, where);
  std::vector<ExpPolynomialTarget> zf;
  std::vector<PolynomialTarget> fr;
  if (j.contains("zero_free")) {
    const auto& list = j.at("zero_free");
    if (!list.is_array()) schema(where + ".zero_free: expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      zf.emplace_back(polynomial_from_json(list[k], where + ".zero_free[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("free")) {
    const auto& list = j.at("free");
    if (!list.is_array()) schema(where + ".free: expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      fr.push_back(polynomial_from_json(list[k], where + ".free[" + std::to_string(k) + "]"));
    }
  }
  if (zf.empty() && fr.empty()) schema(where + ": target has no components");
  return MixedTarget(std::move(zf), std::move(fr));
}

Json to_json(const CompactRegion& r) {
  return std::visit(
      [&](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return {{"kind", "disc"}, {"center", to_json(s.center)}, {"radius", s.radius},
                  {"density", r.grid_density()}};
        } else if constexpr (std::is_same_v<T, Rect>) {
          return {{"kind", "rect"},
                  {"sigma", {s.sigma_min, s.sigma_max}},
                  {"t", {s.t_min, s.t_max}},
                  {"density", r.grid_density()}};
        } else {
          Json labels = Json::array();
          for (const auto& l : s.labels) labels.push_back({l.m, l.l});
          return {{"kind", "union"}, {"base", to_json(*s.base)}, {"shifts", s.shifts}, {"labels", labels}};
        }
      },
      r.shape());
}

CompactRegion region_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) schema(where + ": expected an object");
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "disc") {
    check_keys(j, {"kind", "center", "radius", "density"}, where);
    return CompactRegion::disc(complex_from_json(member(j, "center", where), where + ".center"),
                               get<double>(j, "radius", where),
                               get_or<double>(j, "density", kDefaultGridDensity, where));
  }
  if (kind == "rect") {
    check_keys(j, {"kind", "sigma", "t", "density"}, where);
    const auto sigma = get<std::vector<double>>(j, "sigma", where);
    const auto t = get<std::vector<double>>(j, "t", where);
    if (sigma.size() != 2 || t.size() != 2) schema(where + ": sigma and t are [min, max] pairs");
    return CompactRegion::rect(sigma[0], sigma[1], t[0], t[1],
                               get_or<double>(j, "density", kDefaultGridDensity, where));
  }
  if (kind == "union") {
    check_keys(j, {"kind", "base", "shifts", "labels"}, where);
    const auto base = region_from_json(member(j, "base", where), where + ".base");
    auto shifts = get<std::vector<double>>(j, "shifts", where);
    std::vector<PieceLabel> labels;
    if (j.contains("labels")) {
      const auto raw = get<std::vector<std::vector<int>>>(j, "labels", where);
      for (const auto& l : raw) {
        if (l.size() != 2) schema(where + ": labels are [m, l] pairs");
        labels.push_back({l[0], l[1]});
      }
    }
    return CompactRegion::shifted_union(base, std::move(shifts), std::move(labels));
  }
  schema(where + ": unknown region kind '" + kind + "'");
}

Strip strip_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema(where + ": expected [sigma1, sigma2]");
  const double inf = std::numeric_limits<double>::infinity();
  const double lo = j[0].is_null() ? -inf : number(j[0], where);
  const double hi = j[1].is_null() ? inf : number(j[1], where);
  return Strip(lo, hi);
}

Json to_json(const TowerParams& p) {
  return {{"alpha", p.alpha()},
          {"M", p.M()},
          {"N", p.N()},
          {"L", p.L()},
          {"delta", p.delta()},
          {"M1", {{"three_N", 3.0 * p.N()}, {"inverse_M", 1.0 / p.M()}}},
          {"L1", p.L1()}};
}

TowerParams tower_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"alpha", "M", "N", "L", "delta", "M1", "L1"}, where);
  const double alpha = get<double>(j, "alpha", where);
  const int M = get<int>(j, "M", where), N = get<int>(j, "N", where);
  const int L = get_or<int>(j, "L", 0, where);
  const double delta = get<double>(j, "delta", where);
  if (!j.contains("M1") && !j.contains("L1")) return TowerParams::make(alpha, M, N, L, delta);
  const auto& m1 = member(j, "M1", where);
  check_keys(m1, {"three_N", "inverse_M"}, where + ".M1");
  const double M1 = get<double>(m1, "three_N", where + ".M1") + get<double>(m1, "inverse_M", where + ".M1");
  return TowerParams::from_values(alpha, M, N, L, M1, get<std::int64_t>(j, "L1", where), delta);
}

HybridConstraint hybrid_from_json(const Json& j, double epsilon, const std::string& where) {
  check_keys(j, {"lambdas", "targets"}, where);
  auto lambdas = get<std::vector<double>>(j, "lambdas", where);
  auto targets = complex_list(member(j, "targets", where), where + ".targets");
  if (lambdas.size() != targets.size()) {
    throw Error(ErrorCode::InvalidArgument, where + ": lambdas and targets differ in length");
  }
  return HybridConstraint(std::move(lambdas), std::move(targets), epsilon);
}

Json to_json(const HybridConstraint& h) {
  return {{"lambdas", h.lambdas()}, {"targets", complex_list(h.targets())}};
}

OmegaSpec omega_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"form", "a", "b"}, where);
  const auto form = get<std::string>(j, "form", where);
  if (form == "linear") return OmegaSpec::linear();
  if (form == "power_log") return OmegaSpec::power_log(get<double>(j, "a", where), get<double>(j, "b", where));
  schema(where + ": unknown form '" + form + "'");
}

Json to_json(const DiscreteWitnessSet& ws) {
  return {{"type", "discrete"},
          {"kind", to_string(ws.kind)},
          {"alpha", ws.alpha},
          {"range_start", ws.range_start},
          {"horizon", ws.horizon},
          {"epsilon", ws.epsilon},
          {"window_length", ws.window_length},
          {"members", ws.members},
          {"config_hash", ws.config_hash}};
}

Json to_json(const ContinuousWitnessSet& ws) {
  Json iv = Json::array();
  for (const auto& i : ws.intervals) iv.push_back({i.lo, i.hi});
  return {{"type", "continuous"},
          {"start", ws.start},
          {"horizon", ws.horizon},
          {"epsilon", ws.epsilon},
          {"measure", ws.measure()},
          {"intervals", iv},
          {"config_hash", ws.config_hash}};
}

DiscreteWitnessSet discrete_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"type", "kind", "alpha", "range_start", "horizon", "epsilon", "window_length", "members",
                 "config_hash"},
             where);
  if (get<std::string>(j, "type", where) != "discrete") schema(where + ": not a discrete witness set");
  DiscreteWitnessSet ws;
  ws.kind = witness_kind_from_string(get<std::string>(j, "kind", where));
  ws.alpha = get<double>(j, "alpha", where);
  ws.range_start = get_or<std::int64_t>(j, "range_start", 0, where);
  ws.horizon = get<std::int64_t>(j, "horizon", where);
  ws.epsilon = get<double>(j, "epsilon", where);
  ws.window_length = get_or<double>(j, "window_length", 0.0, where);
  ws.members = get<std::vector<std::int64_t>>(j, "members", where);
  ws.config_hash = get<std::string>(j, "config_hash", where);
  ws.normalize();
  return ws;
}

ContinuousWitnessSet continuous_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"type", "start", "horizon", "epsilon", "measure", "intervals", "config_hash"}, where);
  if (get<std::string>(j, "type", where) != "continuous") schema(where + ": not a continuous witness set");
  ContinuousWitnessSet ws;
  ws.start = get_or<double>(j, "start", 0.0, where);
  ws.horizon = get<double>(j, "horizon", where);
  ws.epsilon = get<double>(j, "epsilon", where);
  for (const auto& p : get<std::vector<std::vector<double>>>(j, "intervals", where)) {
    if (p.size() != 2) schema(where + ": intervals are [lo, hi] pairs");
    ws.intervals.push_back({p[0], p[1]});
  }
  ws.config_hash = get<std::string>(j, "config_hash", where);
  ws.normalize();
  return ws;
}

Json to_json(const TransferConstants& tc) {
  Json xi;
  for (int k = 0; k < 6; ++k) xi[std::to_string(k + 1)] = tc.xi[std::size_t(k)];
  return {{"delta0", tc.delta0}, {"delta", tc.delta},     {"delta1", tc.delta1}, {"tower", to_json(tc.tower)},
          {"C", tc.C},           {"C_tight", tc.C_tight}, {"xi", xi}};
}

TransferConstants constants_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"delta0", "delta", "delta1", "tower", "C", "C_tight", "xi", "config_hash"}, where);
  const auto tower = tower_from_json(member(j, "tower", where), where + ".tower");
  const auto& xj = member(j, "xi", where);
  check_keys(xj, {"1", "2", "3", "4", "5", "6"}, where + ".xi");
  std::array<double, 6> xi{};
  for (int k = 0; k < 6; ++k) xi[std::size_t(k)] = get<double>(xj, std::to_string(k + 1).c_str(), where + ".xi");
  auto tc = TransferConstants::from_values(get<double>(j, "delta0", where), get<double>(j, "delta", where),
                                           get<double>(j, "delta1", where), tower, get<double>(j, "C", where), xi);
  if (j.contains("C_tight") && get<double>(j, "C_tight", where) != tc.C_tight) {
    throw Error(ErrorCode::InvalidArgument, where + ": C_tight does not match the tower");
  }
  return tc;
}

namespace {

Json variant_json(const CountingVariant& v) {
  return {{"name", v.name},
          {"C", v.C},
          {"window_low", v.window_low},
          {"window_high", v.window_high},
          {"multiplicity", v.multiplicity},
          {"violations", v.violations},
          {"aggregate_lhs", v.aggregate_lhs},
          {"aggregate_rhs", v.aggregate_rhs},
          {"aggregate_holds", v.aggregate_holds},
          {"holds", v.holds()}};
}

}  // namespace

Json to_json(const CountingReport& r) {
  return {{"N", r.N},
          {"alpha", r.alpha},
          {"boundary", r.boundary},
          {"holds", r.holds()},
          {"literal", variant_json(r.literal)},
          {"tight", variant_json(r.tight)},
          {"scaled", variant_json(r.scaled)}};
}

std::string counting_csv(const CountingReport& r, const std::string& hash) {
  std::ostringstream out;
  out << "# config_hash=" << hash << "\n";
  out << "j,lhs,rhs,holds,tight_lhs,tight_holds,scaled_lhs,scaled_holds\n";
  for (std::size_t k = 0; k < r.literal.rows.size(); ++k) {
    const auto& a = r.literal.rows[k];
    const auto& b = r.tight.rows[k];
    const auto& c = r.scaled.rows[k];
    out << a.j << ',' << a.lhs << ',' << format_double(a.rhs) << ',' << int(a.holds) << ',' << b.lhs << ','
        << int(b.holds) << ',' << c.lhs << ',' << int(c.holds) << "\n";
  }
  return out.str();
}

Json to_json(const DensityReport& r) {
  Json profile = Json::array();
  for (const auto& p : r.profile) {
    profile.push_back({{"checkpoint", p.checkpoint},
                       {"density", p.density},
                       {"running_min", p.running_min},
                       {"tail_min", p.tail_min}});
  }
  return {{"density", r.density}, {"window", r.window}, {"profile", profile}};
}

Json to_json(const CoveringResult& r) {
  return {{"L", r.L},
          {"mesh_per_axis", r.mesh_per_axis},
          {"mesh_spacing", r.mesh_spacing},
          {"coverage_radius", r.coverage_radius},
          {"slack", r.slack}};
}

Json to_json(const IndependenceReport& r) {
  Json rational = Json::array();
  for (const auto& q : r.rational) rational.push_back({{"index", q.index}, {"p", q.p}, {"q", q.q}});
  return {{"checked_height", r.checked_height},
          {"verdict", to_string(r.verdict)},
          {"relation", r.relation},
          {"rational", rational},
          {"acceptable", r.acceptable()}};
}

Json to_json(const ModulusResult& r) {
  return {{"delta", r.delta},
          {"delta0", r.delta0},
          {"largest_passing", r.largest_passing},
          {"k_points", r.k_points},
          {"tau_points", r.tau_points}};
}

std::string scan_csv(const std::vector<ScanRow>& rows, const std::string& hash) {
  std::ostringstream out;
  out << "# config_hash=" << hash << "\n";
  out << "shift,sup_distance,hybrid_max,pass,index,lipschitz,level\n";
  for (const auto& r : rows) {
    out << format_double(r.shift) << ',' << format_double(r.sup_distance) << ',' << format_double(r.hybrid_max)
        << ',' << int(r.pass) << ',' << r.index << ',' << format_double(r.lipschitz) << ',' << r.level << "\n";
  }
  return out.str();
}

}  // namespace zetashift::io
