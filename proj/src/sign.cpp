#include "pfzeta/sign.hpp"

namespace pfzeta {

std::string to_string(SignTag t) {
  switch (t) {
    case SignTag::Positive: return "positive";
    case SignTag::Negative: return "negative";
    case SignTag::Zero: return "zero";
    case SignTag::Undetermined: return "undetermined";
  }
  return "?";
}

Sign sign_of(const Ball& x) {
  Sign s;
  s.at_bits = x.prec();
  if (x.is_exact_zero())
    s.tag = SignTag::Zero;
  else if (x.is_positive())
    s.tag = SignTag::Positive;
  else if (x.is_negative())
    s.tag = SignTag::Negative;
  else
    s.tag = SignTag::Undetermined;
  return s;
}

Sign certified_sign(const Ball& x, const PrecisionPolicy& policy,
                    const std::function<Ball(mpfr_prec_t)>& recompute) {
  policy.validate();
  Sign s = sign_of(x);
  if (s.certain() || !recompute) return s;
  mpfr_prec_t bits = x.prec() > policy.start_bits ? x.prec() : policy.start_bits;
  while (bits < policy.max_bits) {
    bits = policy.next(bits);
    Ball y = recompute(bits);
    s = sign_of(y);
    s.at_bits = bits;
    if (s.certain()) return s;
  }
  s.tag = SignTag::Undetermined;
  s.at_bits = bits;
  return s;
}

}  // namespace pfzeta
