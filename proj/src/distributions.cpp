#include "tsecon/distributions.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

namespace tsecon::dist {

namespace {
double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }
}  // namespace

double chi2_sf(double x, double df) {
    if (!(x > 0.0)) return 1.0;
    if (!std::isfinite(x)) return 0.0;
    return clamp01(boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), x)));
}

double f_sf(double x, double df1, double df2) {
    if (!(x > 0.0)) return 1.0;
    if (!std::isfinite(x)) return 0.0;
    return clamp01(
        boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), x)));
}

double normal_cdf(double x) { return boost::math::cdf(boost::math::normal(), x); }

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

}  // namespace tsecon::dist
