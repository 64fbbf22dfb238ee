#include "podles/precision.hpp"

#include <boost/multiprecision/detail/digits.hpp>

#include <limits>
#include <stdexcept>

namespace podles {

unsigned digits10_for_bits(unsigned bits)
{
    unsigned d = 1;
    while (boost::multiprecision::detail::digits10_2_2(d) < bits) ++d;
    return d;
}

unsigned effective_bits(unsigned bits)
{
    if (use_binary64(bits)) return std::numeric_limits<double>::digits;
    return static_cast<unsigned>(boost::multiprecision::detail::digits10_2_2(digits10_for_bits(bits)));
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_(Mp::default_precision())
{
    Mp::default_precision(digits10_for_bits(bits < 24 ? 24 : bits));
}

PrecisionScope::~PrecisionScope() { Mp::default_precision(saved_); }

template <> double from_decimal<double>(const std::string& text)
{
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("not a number: " + text);
    return v;
}

template <> Mp from_decimal<Mp>(const std::string& text)
{
    // validate with the binary64 parser first so malformed input fails the same way
    (void)from_decimal<double>(text);
    return Mp(text);
}

template <> double working_epsilon<double>() { return std::numeric_limits<double>::epsilon(); }

template <> Mp working_epsilon<Mp>()
{
    Mp one(1);
    return Mp(ldexp(one, 1 - static_cast<int>(mpfr_get_prec(one.backend().data()))));
}

template <> double pi_value<double>() { return 3.14159265358979323846264338327950288; }

template <> Mp pi_value<Mp>()
{
    Mp r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

} // namespace podles
