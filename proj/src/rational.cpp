#include "steinauth/rational.hpp"

#include "steinauth/error.hpp"

namespace steinauth {

static_assert(sizeof(long) == sizeof(std::int64_t), "gmpxx conversions assume LP64");

namespace {

mpz_class from_int64(std::int64_t x) { return mpz_class(static_cast<long>(x)); }

}  // namespace

Rational::Rational(std::int64_t value) : value_(from_int64(value)) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) fail(ErrorKind::Parameter, "rational with zero denominator");
    value_ = mpq_class(from_int64(num), from_int64(den));
    value_.canonicalize();
}

Rational Rational::parse(const std::string& text) {
    Rational r;
    if (r.value_.set_str(text, 10) != 0 || r.value_.get_den() == 0)
        fail(ErrorKind::Parse, "not a rational: '" + text + "'");
    r.value_.canonicalize();
    return r;
}

std::string Rational::str() const { return numerator() + "/" + denominator(); }

Rational& Rational::operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) fail(ErrorKind::Parameter, "division by zero rational");
    value_ /= o.value_;
    return *this;
}

}  // namespace steinauth
