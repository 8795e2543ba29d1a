#ifndef bogoscatter_quadrature_hpp
#define bogoscatter_quadrature_hpp

////////////////////////////////////////////////////////////////////////////////
//                                                                            //
//  This file is part of bogoscatter                                          //
//                                                                            //
//  Copyright 2026 bogoscatter developers                                     //
//                                                                            //
//  Licensed under the Apache License, Version 2.0 (the "License");           //
//  you may not use this file except in compliance with the License.          //
//  You may obtain a copy of the License at                                   //
//                                                                            //
//      http://www.apache.org/licenses/LICENSE-2.0                            //
//                                                                            //
//  Unless required by applicable law or agreed to in writing, software       //
//  distributed under the License is distributed on an "AS IS" BASIS,         //
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  //
//  See the License for the specific language governing permissions and       //
//  limitations under the License.                                            //
//                                                                            //
////////////////////////////////////////////////////////////////////////////////

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <span>
#include <string>
#include <vector>

////////////////////////////////////////////////////////////////////////////////
//                                                                            //
// Globally adaptive one-dimensional quadrature on finite or semi-infinite    //
// intervals, built on the 7/15-point Gauss-Kronrod pair (nodes and weights   //
// are the standard QUADPACK values). The interval with the largest           //
// estimated error is bisected until the summed error estimate meets          //
// max(rel_tol*|value|, abs_tol) or the subdivision budget runs out, in       //
// which case NonConvergence is thrown carrying the partial value and its     //
// error estimate.                                                            //
//                                                                            //
// Two domain transformations are applied up front:                           //
//                                                                            //
//  * a semi-infinite upper limit is truncated at e_max; every integrand in   //
//    this library decays at least like exp(-E), which is < 1e-17 at the      //
//    default e_max = 40, far below the default tolerances;                   //
//                                                                            //
//  * when the lower limit is exactly 0, the slice (0, log_split) is mapped   //
//    to E = log_split*exp(-t) and integrated in t. The occupation-number     //
//    pole f_BE ~ 1/E (tamed to a log by the chi weights) and endpoint        //
//    behavior down to E^(-1/2) are resolved this way without thousands of    //
//    bisections; the map is truncated at t = 60, i.e. E ~ 1e-26*log_split,   //
//    beneath which no admissible integrand contributes at tolerance level.   //
//                                                                            //
// Evaluation order is fixed and independent of tolerances already met, so    //
// results are bit-reproducible for a given spec across runs and thread      //
// counts. Gauss-Kronrod never evaluates interval endpoints, so integrable    //
// endpoint singularities need no special casing by the caller.              //
//                                                                            //
////////////////////////////////////////////////////////////////////////////////

namespace bogoscatter {

  // Tolerances and truncation controls for the semi-infinite collision
  // integrals. log_split < 0 means "auto": callers that know the condensate
  // scale resolve it to min(nbar, 1)/100 themselves; integrate_1d falls back
  // to 0.01.
  struct QuadratureSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    double e_max = 40.0;
    int max_subdivisions = 400;
    double log_split = -1.0;

    double effective_log_split() const noexcept
    {
      return log_split < 0.0 ? 0.01 : log_split;
    }
    // The spec used for integrals nested inside another adaptive integral:
    // modestly tighter, so inner noise does not masquerade as outer
    // structure.
    QuadratureSpec inner() const noexcept
    {
      QuadratureSpec s = *this;
      s.rel_tol *= 0.2;
      s.abs_tol *= 0.2;
      return s;
    }
  };

  struct IntegrationResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
  };

  class NonConvergence : public std::exception {
  public:
    NonConvergence( std::string context, double partial_value, double error_estimate )
      : m_partial( partial_value ), m_error( error_estimate ),
        m_msg( std::move( context ) )
    {
      m_msg += ": quadrature failed to converge (partial value "
             + std::to_string( partial_value ) + ", error estimate "
             + std::to_string( error_estimate ) + ")";
    }
    double partial_value() const noexcept { return m_partial; }
    double error_estimate() const noexcept { return m_error; }
    const char* what() const noexcept override { return m_msg.c_str(); }
  private:
    double m_partial;
    double m_error;
    std::string m_msg;
  };

  namespace detail {

    // 7/15 Gauss-Kronrod abscissae and weights on [-1,1] (symmetric half
    // listed). xgk entries at odd index are the embedded Gauss-7 nodes.
    inline constexpr double gk_xgk[8] = {
      0.991455371120813, 0.949107912342759, 0.864864423359769,
      0.741531185599394, 0.586087235467691, 0.405845151377397,
      0.207784955007898, 0.000000000000000 };
    inline constexpr double gk_wgk[8] = {
      0.022935322010529, 0.063092092629979, 0.104790010322250,
      0.140653259715525, 0.169004726639267, 0.190350578064785,
      0.204432940075298, 0.209482141084728 };
    inline constexpr double gk_wg[4] = {
      0.129484966168870, 0.279705391489277,
      0.381830050505119, 0.417959183673469 };

    struct GkInterval {
      double a, b, value, error;
    };

    // One Gauss-Kronrod evaluation on [a,b]; error taken as the raw |K-G|
    // difference, which in practice overestimates the Kronrod error and so
    // errs on the side of further refinement.
    template <class F>
    GkInterval gk15( F&& f, double a, double b )
    {
      const double c = 0.5*( a + b ), h = 0.5*( b - a );
      const double fc = f( c );
      double resg = gk_wg[3]*fc;
      double resk = gk_wgk[7]*fc;
      for ( int j = 0; j < 7; ++j ) {
        const double x = h*gk_xgk[j];
        const double sum = f( c - x ) + f( c + x );
        resk += gk_wgk[j]*sum;
        if ( j % 2 == 1 )
          resg += gk_wg[( j - 1 )/2]*sum;
      }
      return { a, b, resk*h, std::fabs( ( resk - resg )*h ) };
    }

    template <class F>
    IntegrationResult adapt( F&& f, std::vector<GkInterval>& segs,
                             const QuadratureSpec& spec, const char* context )
    {
      int splits = 0;
      for ( ;; ) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        double worst_err = -1.0;
        for ( std::size_t i = 0; i < segs.size(); ++i ) {
          total += segs[i].value;
          err += segs[i].error;
          if ( segs[i].error > worst_err ) {
            worst_err = segs[i].error;
            worst = i;
          }
        }
        if ( err <= std::max( spec.rel_tol*std::fabs( total ), spec.abs_tol ) )
          return { total, err, splits };
        if ( splits >= spec.max_subdivisions )
          throw NonConvergence( context, total, err );
        const GkInterval s = segs[worst];
        const double mid = 0.5*( s.a + s.b );
        if ( !( s.a < mid && mid < s.b ) )  // interval at floating-point resolution
          throw NonConvergence( context, total, err );
        segs[worst] = gk15( f, s.a, mid );
        segs.push_back( gk15( f, mid, s.b ) );
        ++splits;
      }
    }

  }

  // Adaptive integral of f over [a, b], b possibly infinite (truncated at
  // spec.e_max). Optional interior breakpoints seed the initial subdivision
  // at known structure (kinks, scale changes); out-of-range entries are
  // ignored. Throws NonConvergence as described above.
  template <class F>
  IntegrationResult integrate_1d( F&& f, double a, double b, const QuadratureSpec& spec,
                                  std::span<const double> breakpoints = {},
                                  const char* context = "integrate_1d" )
  {
    if ( std::isinf( b ) )
      b = spec.e_max;
    if ( !( b > a ) )
      return { 0.0, 0.0, 0 };

    const double ls = spec.effective_log_split();
    const bool log_leg = ( a == 0.0 && ls > 0.0 && ls < b );

    // Composite axis u: u <= 0 is the log-mapped slice (0, ls) with
    // E = ls*exp(u), u in [-60, 0]; u >= ls (or >= a without the log leg)
    // is the direct axis. No segment ever straddles the gap (0, ls), so the
    // integrand switch is invisible to the adaptive loop.
    auto h = [&]( double u ) {
      if ( log_leg && u <= 0.0 ) {
        const double e = ls*std::exp( u );
        return f( e )*e;
      }
      return f( u );
    };

    std::vector<double> cuts;
    if ( log_leg )
      for ( double u : { -60.0, -30.0, -12.0, -4.0, 0.0 } )
        cuts.push_back( u );
    const double direct_lo = log_leg ? ls : a;
    cuts.push_back( direct_lo );
    for ( double x : breakpoints )
      if ( x > direct_lo && x < b )
        cuts.push_back( x );
    cuts.push_back( b );
    std::sort( cuts.begin(), cuts.end() );

    std::vector<detail::GkInterval> segs;
    segs.reserve( cuts.size() );
    for ( std::size_t i = 0; i + 1 < cuts.size(); ++i )
      if ( cuts[i] < cuts[i + 1] && !( cuts[i] == 0.0 && cuts[i + 1] == ls ) )
        segs.push_back( detail::gk15( h, cuts[i], cuts[i + 1] ) );

    return detail::adapt( h, segs, spec, context );
  }

}

#endif
