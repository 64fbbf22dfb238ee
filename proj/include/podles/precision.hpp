#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

namespace podles {

/// Software float whose mantissa width is taken from the process-wide
/// default at construction time (see PrecisionScope).
using Mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                         boost::multiprecision::et_off>;

/// Smallest decimal-digit setting whose binary mantissa covers `bits`.
unsigned digits10_for_bits(unsigned bits);

/// Mantissa bits actually used for a requested width.
unsigned effective_bits(unsigned bits);

/// Sets the default Mp precision for its lifetime and restores the
/// previous one afterwards. Every Mp created inside the scope carries
/// at least `bits` mantissa bits.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

/// binary64 covers every request up to this width.
inline constexpr unsigned kBinary64Bits = 64;

inline bool use_binary64(unsigned prec_bits) { return prec_bits <= kBinary64Bits; }

template <class R> R from_decimal(const std::string& text);
template <> double from_decimal<double>(const std::string& text);
template <> Mp from_decimal<Mp>(const std::string& text);

inline double to_double(double x) { return x; }
inline double to_double(const Mp& x) { return x.convert_to<double>(); }

/// Machine epsilon of R at the current precision.
template <class R> R working_epsilon();
template <> double working_epsilon<double>();
template <> Mp working_epsilon<Mp>();

template <class R> R pi_value();
template <> double pi_value<double>();
template <> Mp pi_value<Mp>();

/// Minimal complex number over an arbitrary real type; std::complex is
/// only specified for the built-in floating types.
template <class R> struct Cplx {
    R re{0};
    R im{0};

    Cplx() = default;
    Cplx(const R& r) : re(r), im(0) {}
    Cplx(const R& r, const R& i) : re(r), im(i) {}
    Cplx(int r) : re(r), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
    Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
    Cplx& operator*=(const Cplx& o) { *this = *this * o; return *this; }

    friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
    friend Cplx operator*(const Cplx& a, const Cplx& b)
    {
        if (a.im == 0 && b.im == 0) return {a.re * b.re, R(0)};
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cplx operator*(const R& s, const Cplx& a) { return {s * a.re, s * a.im}; }
    friend Cplx operator/(const Cplx& a, const Cplx& b)
    {
        if (b.im == 0) return {a.re / b.re, a.im / b.re};
        R d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Cplx& a, const Cplx& b) { return !(a == b); }
};

template <class R> Cplx<R> conj(const Cplx<R>& z) { return {z.re, -z.im}; }

template <class R> R abs(const Cplx<R>& z)
{
    using std::abs;
    using std::sqrt;
    if (z.im == 0) return abs(z.re);
    return sqrt(z.re * z.re + z.im * z.im);
}

} // namespace podles
