#pragma once

#include <functional>
#include <string>

#include "pfzeta/ball.hpp"

namespace pfzeta {

enum class SignTag { Positive, Negative, Zero, Undetermined };

struct Sign {
  SignTag tag = SignTag::Undetermined;
  mpfr_prec_t at_bits = 0;  // precision at which the verdict was reached

  bool certain() const { return tag != SignTag::Undetermined; }
  bool nonnegative() const {
    return tag == SignTag::Positive || tag == SignTag::Zero;
  }
};

std::string to_string(SignTag t);

struct PrecisionPolicy {
  mpfr_prec_t start_bits = 256;
  mpfr_prec_t max_bits = 16384;
  Rational escalation_factor = 2;

  void validate() const {
    if (start_bits <= 0 || max_bits < start_bits)
      throw std::invalid_argument("PrecisionPolicy: need 0 < start_bits <= max_bits");
    if (escalation_factor <= 1)
      throw std::invalid_argument("PrecisionPolicy: escalation_factor must exceed 1");
  }
  mpfr_prec_t next(mpfr_prec_t bits) const {
    Rational r = escalation_factor * bits;
    Integer n = r.get_num() / r.get_den() + 1;
    mpfr_prec_t b = (mpfr_prec_t)n.get_si();
    return b > max_bits ? max_bits : b;
  }
};

/// Sign of the ball alone, no recomputation.
Sign sign_of(const Ball& x);

/// Certified sign with precision escalation.  `recompute` must produce the
/// same mathematical value enclosed at the requested precision; Positive and
/// Negative are only returned when the ball excludes zero, Zero only for an
/// exact zero.  Undetermined is a value, not an error.
Sign certified_sign(const Ball& x, const PrecisionPolicy& policy,
                    const std::function<Ball(mpfr_prec_t)>& recompute = nullptr);

}  // namespace pfzeta
