#include "podles/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace podles {

template <class R> AlgebraElement<R> AlgebraElement<R>::scalar(const Coeff& c)
{
    AlgebraElement a;
    a.accumulate({}, c);
    return a;
}

template <class R> AlgebraElement<R> AlgebraElement<R>::generator(int i)
{
    if (i < -1 || i > 1) throw std::invalid_argument("generator index must be -1, 0 or 1");
    return word({i});
}

template <class R> AlgebraElement<R> AlgebraElement<R>::word(const Word& w, const Coeff& c)
{
    for (int x : w)
        if (x < -1 || x > 1) throw std::invalid_argument("word letters must be -1, 0 or 1");
    AlgebraElement a;
    a.accumulate(w, c);
    return a;
}

template <class R> void AlgebraElement<R>::accumulate(const Word& w, const Coeff& c)
{
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

template <class R> bool AlgebraElement<R>::is_scalar() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

template <class R> Cplx<R> AlgebraElement<R>::scalar_part() const
{
    auto it = terms_.find(Word{});
    return it == terms_.end() ? Coeff() : it->second;
}

template <class R> int AlgebraElement<R>::degree() const
{
    int d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, static_cast<int>(w.size()));
    return d;
}

template <class R> AlgebraElement<R>& AlgebraElement<R>::operator+=(const AlgebraElement& o)
{
    for (const auto& [w, c] : o.terms_) accumulate(w, c);
    return *this;
}

template <class R> AlgebraElement<R>& AlgebraElement<R>::operator-=(const AlgebraElement& o)
{
    for (const auto& [w, c] : o.terms_) accumulate(w, -c);
    return *this;
}

template <class R> AlgebraElement<R> AlgebraElement<R>::scaled(const Coeff& s) const
{
    AlgebraElement r;
    for (const auto& [w, c] : terms_) r.accumulate(w, s * c);
    return r;
}

template <class R> AlgebraElement<R> AlgebraElement<R>::times(const AlgebraElement& o) const
{
    AlgebraElement r;
    for (const auto& [w1, c1] : terms_)
        for (const auto& [w2, c2] : o.terms_) {
            Word w = w1;
            w.insert(w.end(), w2.begin(), w2.end());
            r.accumulate(w, c1 * c2);
        }
    return r;
}

template <class R> AlgebraElement<R> AlgebraElement<R>::pow(int n) const
{
    if (n < 0) throw std::invalid_argument("negative powers are not defined");
    AlgebraElement r = one();
    for (int k = 0; k < n; ++k) r = r.times(*this);
    return r;
}

template <class R> std::string AlgebraElement<R>::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << to_double(c.re);
        if (c.im != 0) os << (c.im < 0 ? "-" : "+") << to_double(abs(Cplx<R>(c.im))) << "i";
        os << ")";
        for (int x : w) os << (x < 0 ? "*xm1" : (x == 0 ? "*x0" : "*xp1"));
    }
    return os.str();
}

template <class R> AlgebraElement<R> star(const AlgebraElement<R>& a, const R& q)
{
    using Coeff = Cplx<R>;
    AlgebraElement<R> r;
    for (const auto& [w, c] : a.terms()) {
        Word sw(w.rbegin(), w.rend());
        Coeff k = conj(c);
        for (int& x : sw) {
            if (x == -1) {
                k = k * Coeff(-1 / q);
                x = 1;
            } else if (x == 1) {
                k = k * Coeff(-q);
                x = -1;
            }
        }
        r += AlgebraElement<R>::word(sw, k);
    }
    return r;
}

template <class R> LaurentPoly<R> LaurentPoly<R>::constant(const Cplx<R>& c) { return monomial(0, c); }

template <class R> LaurentPoly<R> LaurentPoly<R>::monomial(int power, const Cplx<R>& c)
{
    LaurentPoly p;
    if (!c.is_zero()) p.coeffs[power] = c;
    return p;
}

template <class R> Cplx<R> LaurentPoly<R>::coeff(int power) const
{
    auto it = coeffs.find(power);
    return it == coeffs.end() ? Cplx<R>() : it->second;
}

template <class R> bool LaurentPoly<R>::is_zero(const R& tol) const
{
    for (const auto& [k, c] : coeffs)
        if (abs(c) > tol) return false;
    return true;
}

template <class R> LaurentPoly<R> LaurentPoly<R>::operator+(const LaurentPoly& o) const
{
    LaurentPoly r = *this;
    for (const auto& [k, c] : o.coeffs) {
        r.coeffs[k] += c;
        if (r.coeffs[k].is_zero()) r.coeffs.erase(k);
    }
    return r;
}

template <class R> LaurentPoly<R> LaurentPoly<R>::operator*(const LaurentPoly& o) const
{
    LaurentPoly r;
    for (const auto& [k1, c1] : coeffs)
        for (const auto& [k2, c2] : o.coeffs) r.coeffs[k1 + k2] += c1 * c2;
    for (auto it = r.coeffs.begin(); it != r.coeffs.end();)
        it = it->second.is_zero() ? r.coeffs.erase(it) : std::next(it);
    return r;
}

template <class R> LaurentPoly<R> LaurentPoly<R>::scaled(const Cplx<R>& s) const
{
    LaurentPoly r;
    for (const auto& [k, c] : coeffs)
        if (!(s * c).is_zero()) r.coeffs[k] = s * c;
    return r;
}

template <class R> LaurentPoly<R> conj(const LaurentPoly<R>& p)
{
    LaurentPoly<R> r;
    for (const auto& [k, c] : p.coeffs) r.coeffs[-k] = conj(c);
    return r;
}

template <class R> LaurentPoly<R> sigma_t(const AlgebraElement<R>& a, const R& q, const R& t)
{
    using std::sqrt;
    using P = LaurentPoly<R>;
    const R rho = sqrt((1 + q * q) * (1 - t));
    const std::array<P, 3> img = {P::monomial(-1, Cplx<R>(-rho / q)), P::constant(Cplx<R>(t)),
                                  P::monomial(1, Cplx<R>(rho))};
    P total;
    for (const auto& [w, c] : a.terms()) {
        P term = P::constant(c);
        for (int x : w) term = term * img[x + 1];
        total = total + term;
    }
    return total;
}

template <class R> Cplx<R> circle_integral(const LaurentPoly<R>& p) { return R(4) * p.coeff(0); }

template <class R>
BandedOperator<R> represent(const AlgebraElement<R>& a, const std::array<BandedOperator<R>, 3>& gens,
                            const BandedOperator<R>& unit)
{
    std::map<Word, BandedOperator<R>> cache;
    BandedOperator<R> total(unit.in_ptr(), unit.out_ptr());
    for (const auto& [w, c] : a.terms()) {
        // products are built from the right so suffixes can be shared
        const BandedOperator<R>* cur = &unit;
        Word suffix;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            suffix.insert(suffix.begin(), *it);
            auto found = cache.find(suffix);
            if (found == cache.end())
                found = cache.emplace(suffix, compose(gens[*it + 1], *cur)).first;
            cur = &found->second;
        }
        total = add(total, scale(*cur, c));
    }
    return total;
}

namespace {

template <class R> class Parser {
public:
    Parser(const std::string& s, const R& q, const R& t) : s_(s), q_(q), t_(t) {}

    AlgebraElement<R> run()
    {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    using E = AlgebraElement<R>;
    using C = Cplx<R>;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw std::invalid_argument("element syntax error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    E expr()
    {
        E acc = term();
        for (;;) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else return acc;
        }
    }

    E term()
    {
        E acc = unary();
        for (;;) {
            if (eat('*')) {
                acc = acc * unary();
            } else if (eat('/')) {
                E d = unary();
                if (!d.is_scalar() || d.is_zero()) fail("division by a non-scalar or zero");
                acc = acc.scaled(C(R(1)) / d.scalar_part());
            } else {
                return acc;
            }
        }
    }

    E unary()
    {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    E power()
    {
        E base = atom();
        if (eat('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected a non-negative integer exponent");
            base = base.pow(std::stoi(s_.substr(start, pos_ - start)));
        }
        return base;
    }

    E atom()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            E e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (id == "q") return E::scalar(C(q_));
            if (id == "t") return E::scalar(C(t_));
            if (id == "i") return E::scalar(C(R(0), R(1)));
            if (id == "xm1") return E::generator(-1);
            if (id == "x0") return E::generator(0);
            if (id == "xp1" || id == "x1") return E::generator(1);
            if (id == "star") {
                if (!eat('(')) fail("expected '(' after star");
                E e = expr();
                if (!eat(')')) fail("expected ')'");
                return star(e, q_);
            }
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    E number()
    {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string lit = s_.substr(start, pos_ - start);
        try {
            return E::scalar(C(from_decimal<R>(lit)));
        } catch (const std::exception&) {
            pos_ = start;
            fail("bad number '" + lit + "'");
        }
    }

    const std::string& s_;
    R q_;
    R t_;
    std::size_t pos_ = 0;
};

} // namespace

template <class R> AlgebraElement<R> parse_element(const std::string& text, const R& q, const R& t)
{
    return Parser<R>(text, q, t).run();
}

#define PODLES_INSTANTIATE(R)                                                                              \
    template class AlgebraElement<R>;                                                                      \
    template struct LaurentPoly<R>;                                                                        \
    template AlgebraElement<R> star(const AlgebraElement<R>&, const R&);                                  \
    template LaurentPoly<R> conj(const LaurentPoly<R>&);                                                   \
    template LaurentPoly<R> sigma_t(const AlgebraElement<R>&, const R&, const R&);                        \
    template Cplx<R> circle_integral(const LaurentPoly<R>&);                                               \
    template BandedOperator<R> represent(const AlgebraElement<R>&, const std::array<BandedOperator<R>, 3>&, \
                                         const BandedOperator<R>&);                                        \
    template AlgebraElement<R> parse_element(const std::string&, const R&, const R&);

PODLES_INSTANTIATE(double)
PODLES_INSTANTIATE(Mp)

#undef PODLES_INSTANTIATE

} // namespace podles
