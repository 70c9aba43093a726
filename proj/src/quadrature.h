#ifndef JUNCTION_SRC_QUADRATURE_H
#define JUNCTION_SRC_QUADRATURE_H

#include "junction/exact.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace junction::detail {

// Adaptive Gauss-Kronrod; throws NumericError with the achieved estimate
// when the requested tolerance is not met.
template <class F>
double
integrate (F f, double a, double b, const QuadratureSpec &q, double *err_out = nullptr)
{
  double err = 0.0;
  double l1 = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate (
      f, a, b, static_cast<unsigned> (q.max_subdivisions), q.rel_tol, &err, &l1);
  if (!std::isfinite (v) || err > std::max (10.0 * q.rel_tol * l1, q.abs_tol))
    {
      std::ostringstream os;
      os << "quadrature did not converge on [" << a << ", " << b << "]: value " << v
         << ", error estimate " << err;
      throw NumericError (os.str ());
    }
  if (err_out)
    *err_out += err;
  return v;
}

} // namespace junction::detail

#endif
