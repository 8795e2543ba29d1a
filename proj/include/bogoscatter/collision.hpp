#ifndef bogoscatter_collision_hpp
#define bogoscatter_collision_hpp

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

#include "bogoscatter/core.hpp"
#include "bogoscatter/distribution.hpp"
#include "bogoscatter/quadrature.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

////////////////////////////////////////////////////////////////////////////////
//                                                                            //
// The two isotropically reduced collision operators of the condensed Bose    //
// gas, with the angular delta functions already integrated out:              //
//                                                                            //
//   Q (gas-gas):   (1/p1) * int dE2 int_0^{E1+E2} dE3                        //
//                  [ (1+f1)(1+f2)f3f4 - f1 f2 (1+f3)(1+f4) ]                 //
//                  * K * zeta(E1,E2,E3,E4),  E4 = E1+E2-E3;                  //
//                                                                            //
//   W (gas-condensate): two branches, E3 = E1+E2 with statistical weight 2   //
//                  and E3 = E1-E2 (E2 < E1) with weight 1, each carrying     //
//                  chi(E2)chi(E3) and its gain/loss occupation bracket.      //
//                                                                            //
// Both accept the full kernels, the constant kernel 1, or a user-supplied    //
// sigma(E1), and either collision part separately. For parts = Both the      //
// bracket is evaluated pointwise inside one integral, never as the           //
// difference of two separately converged integrals -- at equilibrium the    //
// bracket cancels at every node and the numerical result is zero to          //
// roundoff rather than to quadrature tolerance.                              //
//                                                                            //
// Occupation factors enter only through f*chi and (1+f)*chi, which are       //
// finite at E -> 0 for the equilibrium distribution; the 1/E occupation     //
// pole never appears undamped in an integrand.                               //
//                                                                            //
////////////////////////////////////////////////////////////////////////////////

namespace bogoscatter {

  // Kernel selector for the collision operators. FullT is only meaningful in
  // q_collision and FullS in w_collision; the constant kernel and a supplied
  // sigma(E1) work in both.
  struct KernelMode {
    enum class Kind { FullT, FullS, ConstantOne, Sigma };
    Kind kind = Kind::ConstantOne;
    std::function<double( double )> sigma;  // used iff kind == Sigma

    static KernelMode full_T() { return { Kind::FullT, {} }; }
    static KernelMode full_S() { return { Kind::FullS, {} }; }
    static KernelMode constant_one() { return { Kind::ConstantOne, {} }; }
    static KernelMode with_sigma( std::function<double( double )> s )
    {
      return { Kind::Sigma, std::move( s ) };
    }
  };

  enum class CollisionParts { GainOnly, LossOnly, Both };

  namespace detail {

    inline QuadratureSpec resolve_log_split( QuadratureSpec spec, double nbar ) noexcept
    {
      if ( spec.log_split < 0.0 )
        spec.log_split = std::min( nbar, 1.0 )/100.0;
      return spec;
    }

    // sigma(E1) factor for kernels that do not depend on the inner variables;
    // returns 1 for the full kernels (applied per-node elsewhere).
    inline double outer_kernel_factor( const KernelMode& k, double e1 )
    {
      switch ( k.kind ) {
      case KernelMode::Kind::ConstantOne: return 1.0;
      case KernelMode::Kind::Sigma:       return k.sigma( e1 );
      default:                            return 1.0;
      }
    }

    // gain - loss with the near-equilibrium cancellation paid in ulps of the
    // occupation log-ratios instead of ulps of the occupation products:
    // loss * expm1(lam), lam = sum of gain-side log((1+f)/f) minus loss-side.
    // A vanished side (tabulated f hitting zero) falls back to the direct
    // difference, where nothing cancels.
    inline double stable_both( double gain, double loss, double lam ) noexcept
    {
      if ( !( gain > 0.0 ) || !( loss > 0.0 ) )
        return gain - loss;
      return loss*std::expm1( lam );
    }

    // M'-weighted double integral of the gas-gas reduction with the
    // equilibrium distribution and the f1-dependent factors stripped:
    //   int dE2 int dE3  K(E2,E3,E4) * window * [f2 chi2][(1+f3)chi3][(1+f4)chi4],
    // E4 = E1+E2-E3. This is the common engine of the alpha_T ratio (where
    // the stripped factors cancel) and of the loss-only operator.
    template <class KernelFn>
    double nn_reduced_integral( double e1, CondensateScale n, const QuadratureSpec& spec0,
                                KernelFn&& kernel, const char* context )
    {
      const QuadratureSpec spec = resolve_log_split( spec0, n.nbar );
      const QuadratureSpec inner_spec = spec.inner();
      const double p1 = inverse_dispersion( e1, n );
      auto outer = [&]( double e2 ) {
        const double up = e1 + e2;
        const double f2c = occ_chi( e2, n.nbar );
        if ( f2c == 0.0 )
          return 0.0;
        const double p2 = inverse_dispersion( e2, n );
        auto inner = [&]( double e3 ) {
          const double e4 = up - e3;
          if ( e4 <= 0.0 )
            return 0.0;
          const double p3 = inverse_dispersion( e3, n );
          const double p4 = inverse_dispersion( e4, n );
          const double w = std::max( momentum_window( p1, p2, p3, p4 ), window_floor() );
          if ( w <= 0.0 )
            return 0.0;
          return kernel( e2, e3, e4 )*w*occp1_chi( e3, n.nbar )*occp1_chi( e4, n.nbar );
        };
        const double breaks[] = { n.nbar, e1, e2, up - n.nbar, up - e1, up - e2 };
        const double v = integrate_1d( inner, 0.0, up, inner_spec, breaks, context ).value;
        return f2c*v;
      };
      const double breaks[] = { n.nbar, e1, 1.0 };
      return integrate_1d( outer, 0.0, std::numeric_limits<double>::infinity(),
                           spec, breaks, context ).value;
    }

    // M''-weighted single integral of the gas-condensate reduction with the
    // equilibrium distribution, f1-independent part only: both branches of
    //   int dE2  K * [branch weight] * [occupation bracket] * (chi2 chi3)?
    // with the loss-side bracket (2 f2 (1+f3) on the up-branch,
    // (1+f2)(1+f3) on the down-branch). with_chi = false omits the chi
    // weights (used to reproduce the asymmetric printed form of the
    // scattering-length ratio; the denominator always keeps them).
    template <class KernelFn>
    double nc_reduced_integral( double e1, CondensateScale n, const QuadratureSpec& spec0,
                                KernelFn&& kernel, bool with_chi, const char* context )
    {
      const QuadratureSpec spec = resolve_log_split( spec0, n.nbar );
      auto plus = [&]( double e2 ) {
        const double e3 = e1 + e2;
        const double wt = with_chi
          ? occ_chi( e2, n.nbar )*occp1_chi( e3, n.nbar )
          : bose_einstein( e2 )*( 1.0 + bose_einstein( e3 ) );
        return 2.0*wt*kernel( e2, e3 );
      };
      auto minus = [&]( double e2 ) {
        const double e3 = e1 - e2;
        if ( e3 <= 0.0 )
          return 0.0;
        const double wt = with_chi
          ? occp1_chi( e2, n.nbar )*occp1_chi( e3, n.nbar )
          : ( 1.0 + bose_einstein( e2 ) )*( 1.0 + bose_einstein( e3 ) );
        return wt*kernel( e2, e3 );
      };
      const double pbreaks[] = { n.nbar, e1, 1.0 };
      const double mbreaks[] = { n.nbar, e1 - n.nbar, 0.5*e1 };
      double v = integrate_1d( plus, 0.0, std::numeric_limits<double>::infinity(),
                               spec, pbreaks, context ).value;
      v += integrate_1d( minus, 0.0, e1, spec, mbreaks, context ).value;
      return v;
    }

  }

  // Gas-gas collision operator at energy E1 for occupation f. Sign
  // convention: gain minus loss; LossOnly and GainOnly return the positive
  // magnitude of their term. Includes the 1/p1 flux factor; the absolute
  // prefactor gamma stays symbolic.
  inline double q_collision( double e1, const IsotropicDistribution& f, CondensateScale n,
                             const KernelMode& kernel, CollisionParts parts,
                             const QuadratureSpec& spec0,
                             KernelForm form = KernelForm::AsPrinted )
  {
    if ( kernel.kind == KernelMode::Kind::FullS )
      throw std::invalid_argument( "q_collision: FullS kernel belongs to w_collision" );
    if ( !( e1 > 0.0 ) )
      throw std::invalid_argument( "q_collision: need E1 > 0" );
    const QuadratureSpec spec = detail::resolve_log_split( spec0, n.nbar );
    const QuadratureSpec inner_spec = spec.inner();
    const bool use_T = ( kernel.kind == KernelMode::Kind::FullT );
    const double kfac = detail::outer_kernel_factor( kernel, e1 );
    const double f1 = f.value( e1 );
    const double lr1 = f.log_ratio( e1 );
    const double p1 = inverse_dispersion( e1, n );

    auto outer = [&]( double e2 ) {
      const double up = e1 + e2;
      const double o2 = f.occ_chi( e2, n );
      const double op2 = f.occp1_chi( e2, n );
      const double p2 = inverse_dispersion( e2, n );
      auto inner = [&]( double e3 ) {
        const double e4 = up - e3;
        if ( e4 <= 0.0 )
          return 0.0;
        const double p3 = inverse_dispersion( e3, n );
        const double p4 = inverse_dispersion( e4, n );
        const double w = std::max( detail::momentum_window( p1, p2, p3, p4 ),
                                   detail::window_floor() );
        if ( w <= 0.0 )
          return 0.0;
        const double kv = use_T ? kernel_T( e1, e2, e3, e4, n, form ) : kfac;
        double bracket = 0.0;
        switch ( parts ) {
        case CollisionParts::GainOnly:
          bracket = ( 1.0 + f1 )*op2*f.occ_chi( e3, n )*f.occ_chi( e4, n );
          break;
        case CollisionParts::LossOnly:
          bracket = f1*o2*f.occp1_chi( e3, n )*f.occp1_chi( e4, n );
          break;
        case CollisionParts::Both:
          bracket = detail::stable_both(
            ( 1.0 + f1 )*op2*f.occ_chi( e3, n )*f.occ_chi( e4, n ),
            f1*o2*f.occp1_chi( e3, n )*f.occp1_chi( e4, n ),
            lr1 + f.log_ratio( e2 ) - f.log_ratio( e3 ) - f.log_ratio( e4 ) );
          break;
        }
        return kv*w*bracket;
      };
      const double breaks[] = { n.nbar, e1, e2, up - n.nbar, up - e1, up - e2 };
      return integrate_1d( inner, 0.0, up, inner_spec, breaks, "q_collision/inner" ).value;
    };
    const double breaks[] = { n.nbar, e1, 1.0 };
    const double v = integrate_1d( outer, 0.0, std::numeric_limits<double>::infinity(),
                                   spec, breaks, "q_collision" ).value;
    return v/p1;
  }

  // Gas-condensate collision operator at energy E1. Identically zero without
  // a condensate (the absolute prefactor is proportional to n_c). The chi
  // weights multiply both branches for every kernel choice. Sign convention
  // as in q_collision; includes the 1/p1 flux factor.
  inline double w_collision( double e1, const IsotropicDistribution& f, CondensateScale n,
                             const KernelMode& kernel, CollisionParts parts,
                             const QuadratureSpec& spec0,
                             KernelForm form = KernelForm::AsPrinted )
  {
    if ( kernel.kind == KernelMode::Kind::FullT )
      throw std::invalid_argument( "w_collision: FullT kernel belongs to q_collision" );
    if ( !( e1 > 0.0 ) )
      throw std::invalid_argument( "w_collision: need E1 > 0" );
    if ( n.nbar == 0.0 )
      return 0.0;
    const QuadratureSpec spec = detail::resolve_log_split( spec0, n.nbar );
    const bool use_S = ( kernel.kind == KernelMode::Kind::FullS );
    const double kfac = detail::outer_kernel_factor( kernel, e1 );
    const double f1 = f.value( e1 );
    const double lr1 = f.log_ratio( e1 );
    const double p1 = inverse_dispersion( e1, n );

    // Up-branch: E3 = E1+E2, statistical weight 2.
    //   gain = (1+f1)(1+f2)f3, loss = f1 f2 (1+f3).
    auto plus = [&]( double e2 ) {
      const double e3 = e1 + e2;
      const double kv = use_S ? kernel_S( e1, e2, e3, n, form ) : kfac;
      double bracket = 0.0;
      switch ( parts ) {
      case CollisionParts::GainOnly:
        bracket = ( 1.0 + f1 )*f.occp1_chi( e2, n )*f.occ_chi( e3, n );
        break;
      case CollisionParts::LossOnly:
        bracket = f1*f.occ_chi( e2, n )*f.occp1_chi( e3, n );
        break;
      case CollisionParts::Both:
        bracket = detail::stable_both(
          ( 1.0 + f1 )*f.occp1_chi( e2, n )*f.occ_chi( e3, n ),
          f1*f.occ_chi( e2, n )*f.occp1_chi( e3, n ),
          lr1 + f.log_ratio( e2 ) - f.log_ratio( e3 ) );
        break;
      }
      return 2.0*kv*bracket;
    };
    // Down-branch: E3 = E1-E2, weight 1.
    //   gain = (1+f1)f2 f3, loss = f1 (1+f2)(1+f3).
    auto minus = [&]( double e2 ) {
      const double e3 = e1 - e2;
      if ( e3 <= 0.0 )
        return 0.0;
      const double kv = use_S ? kernel_S( e1, e2, e3, n, form ) : kfac;
      double bracket = 0.0;
      switch ( parts ) {
      case CollisionParts::GainOnly:
        bracket = ( 1.0 + f1 )*f.occ_chi( e2, n )*f.occ_chi( e3, n );
        break;
      case CollisionParts::LossOnly:
        bracket = f1*f.occp1_chi( e2, n )*f.occp1_chi( e3, n );
        break;
      case CollisionParts::Both:
        bracket = detail::stable_both(
          ( 1.0 + f1 )*f.occ_chi( e2, n )*f.occ_chi( e3, n ),
          f1*f.occp1_chi( e2, n )*f.occp1_chi( e3, n ),
          lr1 - f.log_ratio( e2 ) - f.log_ratio( e3 ) );
        break;
      }
      return kv*bracket;
    };
    const double pbreaks[] = { n.nbar, e1, 1.0 };
    const double mbreaks[] = { n.nbar, e1 - n.nbar, 0.5*e1 };
    double v = integrate_1d( plus, 0.0, std::numeric_limits<double>::infinity(),
                             spec, pbreaks, "w_collision/up" ).value;
    v += integrate_1d( minus, 0.0, e1, spec, mbreaks, "w_collision/down" ).value;
    return v/p1;
  }

  // The M' weight of the gas-gas reduction: zeta * f2 (1+f3)(1+f4) at
  // equilibrium, with E4 = E1+E2-E3. Non-negative; -> 0 as E3 -> E1+E2
  // because the geometric window closes linearly in p4 (the chi/occupation
  // combination alone would stay finite).
  inline double m_prime( double e1, double e2, double e3, CondensateScale n )
  {
    if ( !( e2 > 0.0 ) || !( e3 > 0.0 ) || !( e3 < e1 + e2 ) )
      throw std::invalid_argument( "m_prime: need E2 > 0 and 0 < E3 < E1+E2" );
    const double e4 = e1 + e2 - e3;
    const double p1 = inverse_dispersion( e1, n );
    const double p2 = inverse_dispersion( e2, n );
    const double p3 = inverse_dispersion( e3, n );
    const double p4 = inverse_dispersion( e4, n );
    const double w = std::max( detail::momentum_window( p1, p2, p3, p4 ),
                               detail::window_floor() );
    return w*detail::occ_chi( e2, n.nbar )
            *detail::occp1_chi( e3, n.nbar )
            *detail::occp1_chi( e4, n.nbar );
  }

}

#endif
