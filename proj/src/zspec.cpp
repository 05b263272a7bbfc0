#include <string>

#include "zetashift/zeta.hpp"

namespace zetashift {

ZSpec ZSpec::riemann() { return ZSpec{}; }

ZSpec ZSpec::hurwitz(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Hurwitz beta must lie in (0,1]");
  }
  ZSpec z;
  z.kind_ = Kind::Hurwitz;
  z.beta_ = beta;
  return z;
}

ZSpec ZSpec::ratio(ZSpec numerator, AffineMap denominator_map) {
  ZSpec denominator = numerator;
  return ratio(std::move(numerator), std::move(denominator), denominator_map);
}

ZSpec ZSpec::ratio(ZSpec numerator, ZSpec denominator,
                   AffineMap denominator_map) {
  require(numerator.arity() == 1 && denominator.arity() == 1,
          "ratio operands must be scalar");
  require(std::isfinite(denominator_map.scale) &&
              std::isfinite(denominator_map.offset) &&
              denominator_map.scale != 0.0,
          "ratio map must be finite with nonzero scale");
  ZSpec z;
  z.kind_ = Kind::Ratio;
  z.map_ = denominator_map;
  z.children_ = {std::move(numerator), std::move(denominator)};
  return z;
}

ZSpec ZSpec::product(std::vector<ZSpec> factors) {
  require(!factors.empty(), "product needs at least one factor");
  for (const auto& f : factors) require(f.arity() == 1, "product factors must be scalar");
  ZSpec z;
  z.kind_ = Kind::Product;
  z.children_ = std::move(factors);
  return z;
}

ZSpec ZSpec::tuple(std::vector<ZSpec> components) {
  require(!components.empty(), "tuple arity must be >= 1");
  for (const auto& c : components) {
    require(c.kind() != Kind::Tuple, "tuple components must be scalar");
  }
  ZSpec z;
  z.kind_ = Kind::Tuple;
  z.children_ = std::move(components);
  return z;
}

std::size_t ZSpec::arity() const {
  return kind_ == Kind::Tuple ? children_.size() : 1;
}

namespace {

Complex eval_scalar(const ZSpec& z, Complex s, const EvalConfig& cfg) {
  switch (z.kind()) {
    case ZSpec::Kind::Riemann:
      return eval_riemann_zeta(s, cfg);
    case ZSpec::Kind::Hurwitz:
      return eval_hurwitz_zeta(s, z.beta(), cfg);
    case ZSpec::Kind::Ratio: {
      const Complex num = eval_scalar(z.children()[0], s, cfg);
      const Complex den = eval_scalar(z.children()[1], z.map().apply(s), cfg);
      if (std::abs(den) < kDivisionGuard) {
        throw Error(ErrorCode::DivisionNearZero, "ratio denominator vanishes",
                    std::abs(den));
      }
      return num / den;
    }
    case ZSpec::Kind::Product: {
      Complex p = 1.0;
      for (const auto& f : z.children()) p *= eval_scalar(f, s, cfg);
      return p;
    }
    case ZSpec::Kind::Tuple:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "tuple used where a scalar is required");
}

}  // namespace

ComplexVec eval_zspec(const ZSpec& z, Complex s, const EvalConfig& cfg) {
  if (z.kind() == ZSpec::Kind::Tuple) {
    ComplexVec out;
    out.reserve(z.children().size());
    for (const auto& c : z.children()) out.push_back(eval_scalar(c, s, cfg));
    return out;
  }
  return {eval_scalar(z, s, cfg)};
}

ZSpecFunction::ZSpecFunction(ZSpec spec, EvalConfig cfg)
    : spec_(std::move(spec)), cfg_(cfg), arity_(spec_.arity()) {
  cfg_.validate();
}

void ZSpecFunction::evaluate(Complex s, std::span<Complex> out) const {
  if (spec_.kind() == ZSpec::Kind::Tuple) {
    const auto& children = spec_.children();
    for (std::size_t i = 0; i < children.size(); ++i) {
      out[i] = eval_zspec(children[i], s, cfg_)[0];
    }
  } else {
    out[0] = eval_zspec(spec_, s, cfg_)[0];
  }
}

LambdaFunction LambdaFunction::scalar(std::function<Complex(Complex)> f) {
  return LambdaFunction(1, [f = std::move(f)](Complex s, std::span<Complex> out) {
    out[0] = f(s);
  });
}

}  // namespace zetashift
