#ifndef bogoscatter_effective_hpp
#define bogoscatter_effective_hpp

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

#include "bogoscatter/collision.hpp"
#include "bogoscatter/parallel.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

////////////////////////////////////////////////////////////////////////////////
//                                                                            //
// Effective scattering lengths and derived population observables.           //
//                                                                            //
// alpha_T(E1) is the least-squares constant that best replaces the gas-gas   //
// kernel inside the loss integral at fixed E1; squared it is the ratio of    //
// the kernel-weighted to unweighted reduced double integrals, in which the   //
// occupation of the evaluated mode and the flux factor cancel. alpha_S is    //
// the analogous single-integral ratio for the gas-condensate operator.       //
//                                                                            //
// The gas-condensate ratio supports two weightings. Consistent keeps the    //
// chi factors of the reduced operator in numerator and denominator alike.    //
// AsPrinted reproduces a published asymmetric variant whose numerator drops  //
// them; that numerator is logarithmically divergent at the lower             //
// integration limit whenever the evaluated mode retains a hole component,    //
// and the value returned then is a truncation-regularized one (the log      //
// substitution cuts off sixty e-foldings below the split point). It is      //
// provided for comparison runs, not as a default.                            //
//                                                                            //
////////////////////////////////////////////////////////////////////////////////

namespace bogoscatter {

  // Weighting of the gas-condensate scattering ratio, see the block comment.
  enum class AlphaSMode { Consistent, AsPrinted };

  // Requested averaging region contains no states (threshold never reached).
  class EmptyRegion : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  inline double alpha_T( double e1, CondensateScale n, const QuadratureSpec& spec = {},
                         KernelForm form = KernelForm::AsPrinted )
  {
    if ( !( e1 > 0.0 ) || !( n.nbar > 0.0 ) )
      throw std::invalid_argument( "alpha_T: need E1 > 0 and nbar > 0" );
    const double num = detail::nn_reduced_integral(
      e1, n, spec,
      [&]( double e2, double e3, double e4 ) { return kernel_T( e1, e2, e3, e4, n, form ); },
      "alpha_T/num" );
    const double den = detail::nn_reduced_integral(
      e1, n, spec, []( double, double, double ) { return 1.0; }, "alpha_T/den" );
    return std::sqrt( num/den );
  }

  inline double alpha_S( double e1, CondensateScale n,
                         AlphaSMode mode = AlphaSMode::Consistent,
                         const QuadratureSpec& spec = {},
                         KernelForm form = KernelForm::AsPrinted )
  {
    if ( !( e1 > 0.0 ) || !( n.nbar > 0.0 ) )
      throw std::invalid_argument( "alpha_S: need E1 > 0 and nbar > 0" );
    const bool chi_in_num = ( mode == AlphaSMode::Consistent );
    const double num = detail::nc_reduced_integral(
      e1, n, spec,
      [&]( double e2, double e3 ) { return kernel_S( e1, e2, e3, n, form ); },
      chi_in_num, "alpha_S/num" );
    const double den = detail::nc_reduced_integral(
      e1, n, spec, []( double, double ) { return 1.0; }, true, "alpha_S/den" );
    return num/den;
  }

  //--------------------------------------------------------------------------
  // Curves.

  struct CurveGridSpec {
    double emin_frac = 1e-4;  // lower edge as a fraction of nbar
    double emax = 1e3;
    int points = 200;

    std::vector<double> energies( double nbar ) const
    {
      if ( points < 2 || !( emin_frac > 0.0 ) || !( emax > emin_frac*nbar ) )
        throw std::invalid_argument( "CurveGridSpec: degenerate grid" );
      std::vector<double> e( points );
      const double l0 = std::log( emin_frac*nbar ), l1 = std::log( emax );
      for ( int i = 0; i < points; ++i )
        e[i] = std::exp( l0 + ( l1 - l0 )*i/( points - 1.0 ) );
      return e;
    }
  };

  struct AlphaCurve {
    enum class Kind { T, S };
    Kind kind = Kind::T;
    double nbar = 0.0;
    std::vector<double> energies;
    std::vector<double> alpha;
    QuadratureSpec quad;
    KernelForm kernel_form = KernelForm::AsPrinted;
    AlphaSMode s_mode = AlphaSMode::Consistent;

    // Invariant check, reported rather than enforced: returns one line per
    // violation (empty when clean). Range checks use tol = 10*rel_tol.
    std::vector<std::string> validate() const
    {
      std::vector<std::string> bad;
      const double tol = 10.0*quad.rel_tol;
      for ( std::size_t i = 0; i < alpha.size(); ++i ) {
        const double a = alpha[i];
        if ( !std::isfinite( a ) || !( a > 0.0 ) ) {
          bad.push_back( "non-finite or non-positive alpha at E = "
                         + std::to_string( energies[i] ) );
          continue;
        }
        if ( kind == Kind::T && ( a < 1.0 - tol || a > 2.0 + tol ) )
          bad.push_back( "alpha_T out of [1,2] band at E = " + std::to_string( energies[i] )
                         + ": " + std::to_string( a ) );
        if ( kind == Kind::S && a > 1.0 + tol )
          bad.push_back( "alpha_S above 1 at E = " + std::to_string( energies[i] )
                         + ": " + std::to_string( a ) );
      }
      return bad;
    }
  };


  inline AlphaCurve alpha_T_curve( CondensateScale n, const CurveGridSpec& grid = {},
                                   const QuadratureSpec& spec = {},
                                   KernelForm form = KernelForm::AsPrinted,
                                   unsigned threads = 0 )
  {
    AlphaCurve c;
    c.kind = AlphaCurve::Kind::T;
    c.nbar = n.nbar;
    c.energies = grid.energies( n.nbar );
    c.alpha.resize( c.energies.size() );
    c.quad = spec;
    c.kernel_form = form;
    detail::parallel_grid( c.energies.size(), threads, [&]( std::size_t i ) {
      c.alpha[i] = alpha_T( c.energies[i], n, spec, form );
    } );
    return c;
  }

  inline AlphaCurve alpha_S_curve( CondensateScale n, const CurveGridSpec& grid = {},
                                   const QuadratureSpec& spec = {},
                                   AlphaSMode mode = AlphaSMode::Consistent,
                                   KernelForm form = KernelForm::AsPrinted,
                                   unsigned threads = 0 )
  {
    AlphaCurve c;
    c.kind = AlphaCurve::Kind::S;
    c.nbar = n.nbar;
    c.energies = grid.energies( n.nbar );
    c.alpha.resize( c.energies.size() );
    c.quad = spec;
    c.kernel_form = form;
    c.s_mode = mode;
    detail::parallel_grid( c.energies.size(), threads, [&]( std::size_t i ) {
      c.alpha[i] = alpha_S( c.energies[i], n, mode, spec, form );
    } );
    return c;
  }

  //--------------------------------------------------------------------------
  // Global least-squares constant.

  namespace detail {

    template <class WeightFn, class KernelFn>
    double sigma0_impl( CondensateScale n, const QuadratureSpec& spec, WeightFn&& rho_w,
                        KernelFn&& kernel )
    {
      // Loss-moment products against the squared weight; the least-squares
      // constant fit of the kernel-weighted moment on the unweighted one.
      // A constant kernel c is an exact fixed point: qt = c*q1 pointwise.
      auto q_pair = [&]( double e1, double& qt, double& q1 ) {
        const double pref = bose_einstein( e1 )/inverse_dispersion( e1, n );
        qt = pref*nn_reduced_integral(
          e1, n, spec,
          [&]( double e2, double e3, double e4 ) { return kernel( e1, e2, e3, e4 ); },
          "sigma0/qt" );
        q1 = pref*nn_reduced_integral(
          e1, n, spec, []( double, double, double ) { return 1.0; }, "sigma0/q1" );
      };
      auto num_f = [&]( double e1 ) {
        double qt, q1;
        q_pair( e1, qt, q1 );
        const double w = rho_w( e1 );
        return qt*q1*w*w;
      };
      auto den_f = [&]( double e1 ) {
        double qt, q1;
        q_pair( e1, qt, q1 );
        const double w = rho_w( e1 )*q1;
        return w*w;
      };
      const double breaks[] = { n.nbar, 1.0 };
      const double num = integrate_1d( num_f, 0.0, std::numeric_limits<double>::infinity(),
                                       spec, breaks, "sigma0/num" ).value;
      const double den = integrate_1d( den_f, 0.0, std::numeric_limits<double>::infinity(),
                                       spec, breaks, "sigma0/den" ).value;
      return num/den;
    }

  }

  inline double sigma0_T( CondensateScale n, const QuadratureSpec& spec = {},
                          DosForm dos = DosForm::DerivedFromDispersion )
  {
    if ( !( n.nbar > 0.0 ) )
      throw std::invalid_argument( "sigma0_T: need nbar > 0" );
    return detail::sigma0_impl(
      n, spec, [&]( double e ) { return dos_shape( e, n, dos ); },
      [&]( double e1, double e2, double e3, double e4 ) {
        return kernel_T( e1, e2, e3, e4, n, KernelForm::AsPrinted );
      } );
  }

  // rho == 1 variant: the unweighted constant fit, kept as a cross-check of
  // the weighted definition.
  inline double sigma0_T_unit_weight( CondensateScale n, const QuadratureSpec& spec = {} )
  {
    if ( !( n.nbar > 0.0 ) )
      throw std::invalid_argument( "sigma0_T_unit_weight: need nbar > 0" );
    return detail::sigma0_impl(
      n, spec, []( double ) { return 1.0; },
      [&]( double e1, double e2, double e3, double e4 ) {
        return kernel_T( e1, e2, e3, e4, n, KernelForm::AsPrinted );
      } );
  }

  //--------------------------------------------------------------------------
  // Populations.

  namespace detail {

    // Boundary of the region alpha_T > threshold, located by bisection in
    // log E on the monotone curve; the exact-tie point counts as inside the
    // low-energy region (measure zero either way). Returns nothing when even
    // the lowest representable grid energy is not above threshold.
    inline std::optional<double> threshold_energy( CondensateScale n, double threshold,
                                                   const QuadratureSpec& spec,
                                                   KernelForm form )
    {
      const double elo = 1e-4*n.nbar, ehi = 1e3;
      auto inside = [&]( double e ) { return alpha_T( e, n, spec, form ) >= threshold; };
      if ( !inside( elo ) )
        return std::nullopt;
      if ( inside( ehi ) )
        return ehi;
      double llo = std::log( elo ), lhi = std::log( ehi );
      for ( int it = 0; it < 60 && lhi - llo > 1e-9; ++it ) {
        const double lm = 0.5*( llo + lhi );
        ( inside( std::exp( lm ) ) ? llo : lhi ) = lm;
      }
      return std::exp( 0.5*( llo + lhi ) );
    }

    inline double thermal_weight( double e, CondensateScale n, DosForm dos )
    {
      return dos_shape( e, n, dos )*bose_einstein( e );
    }

  }

  inline double low_energy_fraction( CondensateScale n, double threshold = 1.05,
                                     DosForm dos = DosForm::DerivedFromDispersion,
                                     const QuadratureSpec& spec = {},
                                     KernelForm form = KernelForm::AsPrinted )
  {
    if ( !( n.nbar > 0.0 ) || !( threshold > 1.0 ) )
      throw std::invalid_argument( "low_energy_fraction: need nbar > 0, threshold > 1" );
    const auto estar = detail::threshold_energy( n, threshold, spec, form );
    if ( !estar )
      return 0.0;
    auto w = [&]( double e ) { return detail::thermal_weight( e, n, dos ); };
    const double breaks_lo[] = { n.nbar };
    const double breaks_all[] = { n.nbar, 1.0, *estar };
    const double low = integrate_1d( w, 0.0, *estar, spec, breaks_lo,
                                     "low_energy_fraction/low" ).value;
    const double all = integrate_1d( w, 0.0, std::numeric_limits<double>::infinity(),
                                     spec, breaks_all, "low_energy_fraction/all" ).value;
    return low/all;
  }

  inline double mean_alpha_low( CondensateScale n, double threshold = 1.05,
                                DosForm dos = DosForm::DerivedFromDispersion,
                                const QuadratureSpec& spec = {},
                                KernelForm form = KernelForm::AsPrinted )
  {
    if ( !( n.nbar > 0.0 ) || !( threshold > 1.0 ) )
      throw std::invalid_argument( "mean_alpha_low: need nbar > 0, threshold > 1" );
    const auto estar = detail::threshold_energy( n, threshold, spec, form );
    if ( !estar )
      throw EmptyRegion( "mean_alpha_low: alpha_T never exceeds threshold" );
    auto wa = [&]( double e ) {
      return alpha_T( e, n, spec, form )*detail::thermal_weight( e, n, dos );
    };
    auto w = [&]( double e ) { return detail::thermal_weight( e, n, dos ); };
    const double breaks[] = { n.nbar };
    const double num = integrate_1d( wa, 0.0, *estar, spec, breaks,
                                     "mean_alpha_low/num" ).value;
    const double den = integrate_1d( w, 0.0, *estar, spec, breaks,
                                     "mean_alpha_low/den" ).value;
    return num/den;
  }

  inline double mean_alpha_T( CondensateScale n,
                              DosForm dos = DosForm::DerivedFromDispersion,
                              const QuadratureSpec& spec = {},
                              KernelForm form = KernelForm::AsPrinted )
  {
    if ( !( n.nbar > 0.0 ) )
      throw std::invalid_argument( "mean_alpha_T: need nbar > 0" );
    auto wa = [&]( double e ) {
      return alpha_T( e, n, spec, form )*detail::thermal_weight( e, n, dos );
    };
    auto w = [&]( double e ) { return detail::thermal_weight( e, n, dos ); };
    const double breaks[] = { n.nbar, 1.0 };
    const double num = integrate_1d( wa, 0.0, std::numeric_limits<double>::infinity(),
                                     spec, breaks, "mean_alpha_T/num" ).value;
    const double den = integrate_1d( w, 0.0, std::numeric_limits<double>::infinity(),
                                     spec, breaks, "mean_alpha_T/den" ).value;
    return num/den;
  }

  inline double mean_alpha_S( CondensateScale n,
                              DosForm dos = DosForm::DerivedFromDispersion,
                              const QuadratureSpec& spec = {},
                              AlphaSMode mode = AlphaSMode::Consistent,
                              KernelForm form = KernelForm::AsPrinted )
  {
    if ( !( n.nbar > 0.0 ) )
      throw std::invalid_argument( "mean_alpha_S: need nbar > 0" );
    auto wa = [&]( double e ) {
      return alpha_S( e, n, mode, spec, form )*detail::thermal_weight( e, n, dos );
    };
    auto w = [&]( double e ) { return detail::thermal_weight( e, n, dos ); };
    const double breaks[] = { n.nbar, 1.0 };
    const double num = integrate_1d( wa, 0.0, std::numeric_limits<double>::infinity(),
                                     spec, breaks, "mean_alpha_S/num" ).value;
    const double den = integrate_1d( w, 0.0, std::numeric_limits<double>::infinity(),
                                     spec, breaks, "mean_alpha_S/den" ).value;
    return num/den;
  }

  struct PopulationReport {
    double nbar = 0.0;
    double threshold = 1.05;
    double e_star = 0.0;            // 0 when the region is empty
    double n_l = 0.0;
    double a_eff_l_over_a0 = 0.0;   // 0 when the region is empty
    double mean_alpha_t = 0.0;
    double mean_alpha_s = 0.0;
    DosForm dos = DosForm::DerivedFromDispersion;
    bool empty_region = false;
  };

  inline PopulationReport population_report( CondensateScale n, double threshold = 1.05,
                                             DosForm dos = DosForm::DerivedFromDispersion,
                                             const QuadratureSpec& spec = {},
                                             AlphaSMode mode = AlphaSMode::Consistent,
                                             KernelForm form = KernelForm::AsPrinted )
  {
    PopulationReport r;
    r.nbar = n.nbar;
    r.threshold = threshold;
    r.dos = dos;
    const auto estar = detail::threshold_energy( n, threshold, spec, form );
    if ( estar ) {
      r.e_star = *estar;
      r.n_l = low_energy_fraction( n, threshold, dos, spec, form );
      r.a_eff_l_over_a0 = mean_alpha_low( n, threshold, dos, spec, form );
    } else {
      r.empty_region = true;
    }
    r.mean_alpha_t = mean_alpha_T( n, dos, spec, form );
    r.mean_alpha_s = mean_alpha_S( n, dos, spec, mode, form );
    return r;
  }

  //--------------------------------------------------------------------------
  // Condensate growth rate.

  struct GrowthRate {
    double scaled_value = 0.0;  // - integral of W against the shell measure
    Prefactor prefactor;        // the symbolic absolute normalization
  };

  // Net condensate feeding rate for occupation f: minus the momentum-space
  // integral of the gas-condensate operator, with p^2 dp rewritten through
  // the same change of variables that defines the derived density of states
  // (p^2 dp = rho(E)/2 dE, and the operator's flux factor restored by p).
  //
  // The E1 integral starts at a deep-phonon floor instead of 0: below it the
  // integrand is O(E1^2 / nbar^2) so the truncated mass is far below abs_tol,
  // while the occupation scales 1/E1 make the inner gain/loss cancellation
  // unresolvable in doubles. Each inner evaluation also gets its absolute
  // tolerance re-allocated by the outer measure, the usual budget split for
  // nested adaptive quadrature.
  inline GrowthRate condensate_growth_rate( const IsotropicDistribution& f,
                                            CondensateScale n,
                                            const QuadratureSpec& spec = {},
                                            KernelForm form = KernelForm::AsPrinted )
  {
    if ( !( n.nbar > 0.0 ) )
      throw std::invalid_argument( "condensate_growth_rate: need nbar > 0" );
    auto g = [&]( double e1 ) {
      const double measure = inverse_dispersion( e1, n )
                             *0.5*dos_shape( e1, n, DosForm::DerivedFromDispersion );
      QuadratureSpec wspec = spec;
      wspec.abs_tol = std::max( spec.abs_tol, 0.01*spec.abs_tol/measure );
      const double w = w_collision( e1, f, n, KernelMode::full_S(),
                                    CollisionParts::Both, wspec, form );
      return w*measure;
    };
    const double floor_e1 = std::max( 1e-7, 1e-4*n.nbar );
    const double breaks[] = { n.nbar, 1.0 };
    const double v = integrate_1d( g, floor_e1, std::numeric_limits<double>::infinity(),
                                   spec, breaks, "condensate_growth_rate" ).value;
    return { -v, PrefactorConstants::scaled_units().xi };
  }

}

#endif
