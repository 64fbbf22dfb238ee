#pragma once

#include "podles/operator.hpp"
#include "podles/precision.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace podles {

/// A word in the generators; each letter is i in {-1, 0, 1} for x_i.
using Word = std::vector<int>;

/// Element of the free *-algebra on x_{-1}, x_0, x_1: a finite complex
/// combination of words. No relations are imposed.
template <class R> class AlgebraElement {
public:
    using Coeff = Cplx<R>;

    AlgebraElement() = default;

    static AlgebraElement scalar(const Coeff& c);
    static AlgebraElement one() { return scalar(Coeff(R(1))); }
    static AlgebraElement generator(int i);
    static AlgebraElement word(const Word& w, const Coeff& c = Coeff(R(1)));

    const std::map<Word, Coeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// True for multiples of the unit, including zero.
    bool is_scalar() const;
    Coeff scalar_part() const;
    /// Longest word length.
    int degree() const;

    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator-(const AlgebraElement& a) { return a.scaled(Coeff(R(-1))); }
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return a.times(b); }
    friend AlgebraElement operator*(const Coeff& c, const AlgebraElement& a) { return a.scaled(c); }

    AlgebraElement scaled(const Coeff& c) const;
    AlgebraElement times(const AlgebraElement& o) const;
    AlgebraElement pow(int n) const;

    std::string to_string() const;

private:
    void accumulate(const Word& w, const Coeff& c);
    std::map<Word, Coeff> terms_;
};

/// Antilinear antimultiplicative involution with x_0* = x_0,
/// x_{-1}* = -q^{-1} x_1 and x_1* = -q x_{-1}.
template <class R> AlgebraElement<R> star(const AlgebraElement<R>& a, const R& q);

/// Finitely supported Laurent polynomial in lambda with |lambda| = 1.
template <class R> struct LaurentPoly {
    std::map<int, Cplx<R>> coeffs;

    static LaurentPoly constant(const Cplx<R>& c);
    static LaurentPoly monomial(int power, const Cplx<R>& c);

    Cplx<R> coeff(int power) const;
    bool is_zero(const R& tol) const;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly scaled(const Cplx<R>& c) const;
};

/// lambda^k -> conj(c) lambda^{-k}
template <class R> LaurentPoly<R> conj(const LaurentPoly<R>& p);

/// Evaluation at the classical points: x_0 -> t,
/// x_1 -> sqrt((1+q^2)(1-t)) lambda, x_{-1} -> -q^{-1} sqrt((1+q^2)(1-t)) lambda^{-1}.
template <class R> LaurentPoly<R> sigma_t(const AlgebraElement<R>& a, const R& q, const R& t);

/// -(2i/pi) times the contour integral of p(lambda) dlambda/lambda, i.e. 4 coeff_0.
template <class R> Cplx<R> circle_integral(const LaurentPoly<R>& p);

/// Sum of coefficients times products of the generator images, gens[i+1]
/// standing for x_i. `unit` is the identity of the target space.
template <class R>
BandedOperator<R> represent(const AlgebraElement<R>& a, const std::array<BandedOperator<R>, 3>& gens,
                            const BandedOperator<R>& unit);

/// Parses the element grammar
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | power
///   power  := atom ('^' integer)?
///   atom   := number | 'q' | 't' | 'i' | 'xm1' | 'x0' | 'xp1' | 'x1'
///           | 'star' '(' expr ')' | '(' expr ')'
/// Division is only allowed by scalars; q and t are substituted.
/// Throws std::invalid_argument with the offending position on error.
template <class R> AlgebraElement<R> parse_element(const std::string& text, const R& q, const R& t);

} // namespace podles
