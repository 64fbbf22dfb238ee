#include "podles/context.hpp"

#include "podles/precision.hpp"

#include <stdexcept>

namespace podles {

double DiracSchedule::value(int l2) const
{
    if (kind == Kind::Linear) return c1 * (l2 / 2.0) + c2;
    auto it = custom.find(l2);
    if (it == custom.end()) throw std::invalid_argument("custom Dirac schedule has no value at l2=" + std::to_string(l2));
    return it->second;
}

bool DiracSchedule::invertible(int lmax2, int lmin2) const
{
    for (int l2 = lmin2; l2 <= lmax2; l2 += 2)
        if (value(l2) == 0) return false;
    return true;
}

double ModelContext::q_double() const { return from_decimal<double>(q); }
double ModelContext::t_double() const { return from_decimal<double>(t); }

void ModelContext::validate() const
{
    double qv = 0;
    double tv = 0;
    try {
        qv = q_double();
    } catch (const std::exception&) {
        throw std::invalid_argument("q is not a number: " + q);
    }
    try {
        tv = t_double();
    } catch (const std::exception&) {
        throw std::invalid_argument("t is not a number: " + t);
    }
    if (!(qv > 0 && qv < 1)) throw std::domain_error("q must lie in (0,1)");
    if (!(tv >= 0 && tv <= 1)) throw std::invalid_argument("t must lie in [0,1]");
    if (lmax2 < 5) throw std::invalid_argument("lmax2 must be at least 5 so that an interior exists");
    if (prec_bits < 24) throw std::invalid_argument("prec must be at least 24 bits");
    if (dirac.kind == DiracSchedule::Kind::Linear && dirac.c1 == 0)
        throw std::invalid_argument("Dirac schedule needs c1 != 0");
}

} // namespace podles
