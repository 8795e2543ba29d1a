#ifndef bogoscatter_mc_hpp
#define bogoscatter_mc_hpp

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
#include "bogoscatter/parallel.hpp"
#include "bogoscatter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

////////////////////////////////////////////////////////////////////////////////
//                                                                            //
// Monte-Carlo cross-checks of the angular delta-function reductions that     //
// the quadrature path relies on. Nothing here is used in production; the     //
// estimators deliberately work on the unreduced integrals so that they       //
// share no algebra with the reduced kernels they validate.                   //
//                                                                            //
// Every retained delta is smoothed to a Gaussian and the smoothing width is  //
// extrapolated to zero by a two-point Richardson step evaluated per sample   //
// with shared draws, so the extrapolation does not inflate the variance.     //
// Where a delta can be removed without touching the reduction algebra it     //
// is: the momentum delta of the loss-term estimator is absorbed by drawing   //
// the fourth momentum from the smoothing Gaussian itself, and the last       //
// angular integral of the window estimators is the elementary overlap of a   //
// 3-d Gaussian with a sphere, evaluated in closed form.                      //
//                                                                            //
// Reproducibility contract: a fixed seed gives bit-identical estimates.      //
// Sampling runs in a fixed number of batches, each with its own mt19937_64   //
// seeded by a splitmix64 hash of the user seed and the batch index, and      //
// batch results combine in batch order -- the thread count can never change  //
// the output. Uniform deviates take the top 53 bits of the engine word and   //
// normal deviates are Box-Muller, pinned here so results do not depend on    //
// the standard library's distribution implementations either.               //
//                                                                            //
////////////////////////////////////////////////////////////////////////////////

namespace bogoscatter {

  struct McSpec {
    std::uint64_t samples = 1000000;  // independent sample points, >= 1e4;
                                      // rounded up to a whole number of batches
    double epsilon = 0.0;             // delta smoothing width in the units of
                                      // the delta argument; 0 = auto, 1e-2 of
                                      // the smallest scale of the test point
    std::uint64_t seed = 123456789;
    unsigned threads = 0;             // worker pool size; 0 = hardware
  };

  struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
  };

  // The test point sits within the smoothing width of a boundary of the
  // analytic formula (closing window, degenerate triangle); the smoothed
  // estimate is dominated by the boundary shape there and the comparison is
  // ill-posed.
  class DegenerateMomenta : public std::invalid_argument {
  public:
    explicit DegenerateMomenta( const std::string& msg )
      : std::invalid_argument( msg ) {}
  };

  namespace detail {

    struct V3 {
      double x, y, z;
    };

    inline double norm3( const V3& a ) noexcept
    {
      return std::sqrt( a.x*a.x + a.y*a.y + a.z*a.z );
    }

    // Deterministic per-batch stream: splitmix64 finalizer of seed + index.
    inline std::uint64_t batch_seed( std::uint64_t seed, std::uint64_t batch ) noexcept
    {
      std::uint64_t z = seed + 0x9E3779B97F4A7C15ull*( batch + 1 );
      z = ( z ^ ( z >> 30 ) )*0xBF58476D1CE4E5B9ull;
      z = ( z ^ ( z >> 27 ) )*0x94D049BB133111EBull;
      return z ^ ( z >> 31 );
    }

    class McRng {
    public:
      explicit McRng( std::uint64_t seed ) : m_eng( seed ) {}

      // [0,1) from the top 53 bits.
      double uniform() { return double( m_eng() >> 11 )*0x1.0p-53; }

      // (0,1], safe under log().
      double uniform_pos() { return double( ( m_eng() >> 11 ) + 1 )*0x1.0p-53; }

      V3 sphere_dir()
      {
        const double c = 2.0*uniform() - 1.0;
        const double phi = 2.0*std::numbers::pi*uniform();
        const double s = std::sqrt( std::max( 0.0, 1.0 - c*c ) );
        return { s*std::cos( phi ), s*std::sin( phi ), c };
      }

      void normal_pair( double& z1, double& z2 )
      {
        const double r = std::sqrt( -2.0*std::log( uniform_pos() ) );
        const double a = 2.0*std::numbers::pi*uniform();
        z1 = r*std::cos( a );
        z2 = r*std::sin( a );
      }

    private:
      std::mt19937_64 m_eng;
    };

    inline constexpr std::size_t mc_batch_count = 64;

    // Runs `sample` over equal-size batches and returns the batch-means
    // estimate with its standard error. The batch spread absorbs the heavy
    // per-sample weight tails better than a naive second-moment estimate.
    template <class Sample>
    McEstimate mc_run( const McSpec& spec, Sample&& sample )
    {
      if ( spec.samples < 10000 )
        throw std::invalid_argument( "McSpec: need at least 1e4 samples" );
      if ( !( spec.epsilon >= 0.0 ) )
        throw std::invalid_argument( "McSpec: epsilon must be >= 0" );
      const std::uint64_t per =
        ( spec.samples + mc_batch_count - 1 )/mc_batch_count;
      std::vector<double> mean( mc_batch_count );
      parallel_grid( mc_batch_count, spec.threads, [&]( std::size_t b ) {
        McRng rng( batch_seed( spec.seed, b ) );
        double acc = 0.0;
        for ( std::uint64_t i = 0; i < per; ++i )
          acc += sample( rng );
        mean[b] = acc/double( per );
      } );
      double m = 0.0;
      for ( double v : mean )
        m += v;
      m /= double( mc_batch_count );
      double ss = 0.0;
      for ( double v : mean )
        ss += ( v - m )*( v - m );
      const double se =
        std::sqrt( ss/double( mc_batch_count*( mc_batch_count - 1 ) ) );
      return { m, se };
    }

    // 1-d Gaussian delta of width eps.
    inline double gauss1( double x, double eps )
    {
      const double t = x/eps;
      return std::exp( -0.5*t*t )/( eps*std::sqrt( 2.0*std::numbers::pi ) );
    }

    // \int d\hat u  G3(|q_vec - a*\hat u|; eps) over the unit sphere (measure
    // 4 pi): the overlap of a 3-d Gaussian at distance q with the radius-a
    // shell. Written with non-positive exponents only; the small-(a q)
    // branch is the a -> 0 (or q -> 0) limit of the same expression.
    inline double sphere_gauss_overlap( double q, double a, double eps )
    {
      const double e2 = eps*eps;
      const double norm =
        4.0*std::numbers::pi/std::pow( 2.0*std::numbers::pi*e2, 1.5 );
      const double denom = 2.0*a*q/e2;
      if ( denom < 1e-8 )
        return norm*std::exp( -0.5*( q*q + a*a )/e2 );
      const double t = std::exp( -0.5*( q - a )*( q - a )/e2 )
                       - std::exp( -0.5*( q + a )*( q + a )/e2 );
      return norm*t/denom;
    }

    // dE/dp = 2 (p^2 + nbar)/sqrt(p^2 + 2 nbar); sqrt(2 nbar) at p = 0 and
    // 2 p in the free limit.
    inline double dispersion_slope( double p, CondensateScale n ) noexcept
    {
      const double s2 = p*p + 2.0*n.nbar;
      if ( s2 <= 0.0 )
        return 0.0;
      return 2.0*( p*p + n.nbar )/std::sqrt( s2 );
    }

    // Importance mixture for a momentum magnitude on (0, rmax]: half
    // uniform, half log-uniform on [rlo, rmax]. The log component covers the
    // phonon decades where the occupation factors grow like 1/E; plain
    // uniform sampling starves them so badly at small nbar that the
    // loss-term estimate at a phonon evaluation point comes out several
    // hundred percent high with a confidently small error bar.
    inline double draw_momentum( McRng& rng, double rmax, double rlo,
                                 double& weight )
    {
      const double span = std::log( rmax/rlo );
      double r;
      if ( rng.uniform() < 0.5 )
        r = rlo*std::exp( span*rng.uniform() );
      else
        r = rmax*rng.uniform_pos();
      const double density =
        0.5/rmax + ( r >= rlo ? 0.5/( r*span ) : 0.0 );
      weight = 4.0*std::numbers::pi*r*r/density;
      return r;
    }

  }

  //--------------------------------------------------------------------------
  // Analytic companions.

  // \int dhat2 dhat3 dhat4 delta3(p1_vec + p2_vec - p3_vec - p4_vec) with
  // the direction of p1 fixed: 4 pi^2 [min(p1+p3, p2+p4) -
  // max(|p1-p3|, |p2-p4|)]_+ / (p1 p2 p3 p4).
  inline double analytic_angular_window( double p1, double p2, double p3,
                                         double p4 )
  {
    if ( !( p1 > 0.0 && p2 > 0.0 && p3 > 0.0 && p4 > 0.0 ) )
      throw std::invalid_argument( "analytic_angular_window: momenta must be > 0" );
    const double window = std::min( p1 + p3, p2 + p4 )
                          - std::max( std::fabs( p1 - p3 ), std::fabs( p2 - p4 ) );
    if ( window <= 0.0 )
      return 0.0;
    return 4.0*std::numbers::pi*std::numbers::pi*window/( p1*p2*p3*p4 );
  }

  // \int dhat2 dhat3 delta3(p1_vec + p2_vec + p3_vec) with the direction of
  // p1 fixed, as the sign-sum form: -(pi/(p1 p2 p3)) [1 + sgn(p1-p2-p3) +
  // sgn(p2-p1-p3) + sgn(p3-p1-p2)]. Inside the triangle region this is
  // 2 pi/(p1 p2 p3); outside it vanishes.
  inline double analytic_three_momentum( double p1, double p2, double p3 )
  {
    if ( !( p1 > 0.0 && p2 > 0.0 && p3 > 0.0 ) )
      throw std::invalid_argument( "analytic_three_momentum: momenta must be > 0" );
    auto sgn = []( double x ) { return x > 0.0 ? 1.0 : ( x < 0.0 ? -1.0 : 0.0 ); };
    const double v = -std::numbers::pi/( p1*p2*p3 )
                     *( 1.0 + sgn( p1 - p2 - p3 ) + sgn( p2 - p1 - p3 )
                        + sgn( p3 - p1 - p2 ) );
    return v + 0.0;  // outside the triangle the bracket is 0; avoid -0
  }

  //--------------------------------------------------------------------------
  // Estimators.

  inline McEstimate mc_angular_window( double p1, double p2, double p3,
                                       double p4, const McSpec& spec = {} )
  {
    if ( !( p1 > 0.0 && p2 > 0.0 && p3 > 0.0 && p4 > 0.0 ) )
      throw std::invalid_argument( "mc_angular_window: momenta must be > 0" );
    const double eps = spec.epsilon > 0.0
                         ? spec.epsilon
                         : 0.01*std::min( std::min( p1, p2 ), std::min( p3, p4 ) );
    const double window = std::min( p1 + p3, p2 + p4 )
                          - std::max( std::fabs( p1 - p3 ), std::fabs( p2 - p4 ) );
    if ( std::fabs( window ) < eps )
      throw DegenerateMomenta( "mc_angular_window: window within the smoothing"
                               " width of zero" );
    const double ang2 = std::pow( 4.0*std::numbers::pi, 2 );
    return detail::mc_run( spec, [=]( detail::McRng& rng ) {
      const detail::V3 u2 = rng.sphere_dir();
      const detail::V3 u3 = rng.sphere_dir();
      const detail::V3 c = { p2*u2.x - p3*u3.x,
                             p2*u2.y - p3*u3.y,
                             p1 + p2*u2.z - p3*u3.z };
      const double q = detail::norm3( c );
      const double w1 = ang2*detail::sphere_gauss_overlap( q, p4, eps );
      const double wh = ang2*detail::sphere_gauss_overlap( q, p4, 0.5*eps );
      return ( 4.0*wh - w1 )/3.0;
    } );
  }

  inline McEstimate mc_three_momentum( double p1, double p2, double p3,
                                       const McSpec& spec = {} )
  {
    if ( !( p1 > 0.0 && p2 > 0.0 && p3 > 0.0 ) )
      throw std::invalid_argument( "mc_three_momentum: momenta must be > 0" );
    const double eps = spec.epsilon > 0.0
                         ? spec.epsilon
                         : 0.01*std::min( p1, std::min( p2, p3 ) );
    const double b1 = p1 - p2 - p3;
    const double b2 = p2 - p1 - p3;
    const double b3 = p3 - p1 - p2;
    if ( std::fabs( b1 ) < eps || std::fabs( b2 ) < eps || std::fabs( b3 ) < eps )
      throw DegenerateMomenta( "mc_three_momentum: sign argument within the"
                               " smoothing width of zero" );
    return detail::mc_run( spec, [=]( detail::McRng& rng ) {
      const detail::V3 u2 = rng.sphere_dir();
      const detail::V3 c = { p2*u2.x, p2*u2.y, p1 + p2*u2.z };
      const double q = detail::norm3( c );
      const double w1 = 4.0*std::numbers::pi*detail::sphere_gauss_overlap( q, p3, eps );
      const double wh = 4.0*std::numbers::pi*detail::sphere_gauss_overlap( q, p3, 0.5*eps );
      return ( 4.0*wh - w1 )/3.0;
    } );
  }

  // Unreduced loss term with unit kernel at equilibrium occupations: the
  // 9-dimensional momentum integral with delta3 absorbed by sampling the
  // fourth momentum from the smoothing Gaussian around p1 + p2 - p3 and the
  // energy delta smoothed to width eps. The momentum width tracks the
  // smaller of p1 and the phonon crossover sqrt(2 nbar), and both widths
  // halve together in the Richardson step.
  //
  // |p3| is importance-sampled: on top of the uniform + log-uniform floor,
  // half the proposal mass sits in Gaussians centered where the energy
  // mismatch E1 + E2 - E3 - E4(|p1+p2 - p3 u3|) comes close to zero along
  // r3 -- at its sign-change roots, and at near-tangent local dips that
  // approach zero without crossing. Both kinds carry order-1/eps values of
  // the smoothed delta; covering only the roots leaves the tangent dips to
  // the broad components and plants rare huge weights in the tails of the
  // estimator (seed-dependent standard errors an order of magnitude above
  // typical). The broad components keep the proposal positive everywhere
  // the integrand is nonzero, so the targeting affects variance only. The
  // returned value matches the reduced two-dimensional quadrature of the
  // same loss term; the conversion is (2/pi^2) f(E1) times the raw momentum
  // integral.
  inline McEstimate mc_q_loss( double e1, CondensateScale n,
                               const McSpec& spec = {} )
  {
    if ( !( e1 > 0.0 ) )
      throw std::invalid_argument( "mc_q_loss: e1 must be > 0" );
    if ( !( n.nbar >= 0.0 ) )
      throw std::invalid_argument( "mc_q_loss: nbar must be >= 0" );
    const double p1 = inverse_dispersion( e1, n );
    const double e_char = std::min( e1, 1.0 );
    const double p_char = n.nbar > 0.0
                            ? std::min( p1, std::sqrt( 2.0*n.nbar ) )
                            : p1;
    const double eps_e = spec.epsilon > 0.0 ? spec.epsilon : 0.01*e_char;
    const double eps_p = eps_e*( p_char/e_char );
    const double r2max = inverse_dispersion( 35.0, n );
    const double rlo = 1e-4*p_char;
    // Beyond E3 = E1 + E2 + margin the energy Gaussian underflows to zero
    // for any E4 >= 0, so the proposal support can stop there.
    const double margin = 2.0 + 20.0*eps_e;
    auto fbe = []( double e ) { return 1.0/std::expm1( e ); };
    const double scale = ( 2.0/( std::numbers::pi*std::numbers::pi ) )*fbe( e1 );
    auto est = detail::mc_run( spec, [=]( detail::McRng& rng ) {
      double w2m;
      const double r2 = detail::draw_momentum( rng, r2max, rlo, w2m );
      const detail::V3 u2 = rng.sphere_dir();
      const detail::V3 u3 = rng.sphere_dir();
      const double e2 = dispersion( r2, n );
      const double etot = e1 + e2;
      const detail::V3 sv = { r2*u2.x, r2*u2.y, p1 + r2*u2.z };
      const double a2 = sv.x*sv.x + sv.y*sv.y + sv.z*sv.z;
      const double sdot = sv.x*u3.x + sv.y*u3.y + sv.z*u3.z;
      const double r3max = inverse_dispersion( etot + margin, n );
      auto r4_of = [&]( double r3 ) {
        return std::sqrt( std::max( 0.0, a2 - 2.0*r3*sdot + r3*r3 ) );
      };
      auto mismatch = [&]( double r3 ) {
        return etot - dispersion( r3, n ) - dispersion( r4_of( r3 ), n );
      };
      // Locate the shell components along r3: sign-change roots of the
      // mismatch, plus near-tangent dips where |mismatch| bottoms out
      // within a few smoothing widths of zero.
      double comp[6], width[6];
      int ncomp = 0;
      {
        const int nscan = 64;
        const double g0 = 3e-7*r3max;
        const double step = std::log( r3max/g0 )/( nscan - 1 );
        double rp2 = 0.0, mp2 = 0.0;
        double rp1 = g0, mp1 = mismatch( rp1 );
        for ( int k = 1; k < nscan; ++k ) {
          const double rc = g0*std::exp( step*k );
          const double mc = mismatch( rc );
          if ( ncomp < 6 && ( mp1 > 0.0 ) != ( mc > 0.0 ) ) {
            double lo = rp1, hi = rc, flo = mp1;
            for ( int it = 0; it < 30; ++it ) {
              const double mid = 0.5*( lo + hi );
              const double fm = mismatch( mid );
              if ( ( flo > 0.0 ) == ( fm > 0.0 ) ) {
                lo = mid;
                flo = fm;
              } else {
                hi = mid;
              }
            }
            const double r = 0.5*( lo + hi );
            const double r4 = r4_of( r );
            const double dc = r4 > 0.0 ? ( r - sdot )/r4 : 1.0;
            const double slope =
              std::fabs( detail::dispersion_slope( r, n )
                         + detail::dispersion_slope( r4, n )*dc );
            const double spread =
              3.0*( eps_e + eps_p*detail::dispersion_slope( r4, n ) );
            width[ncomp] =
              std::min( 0.25*r3max, spread/std::max( slope, 1e-12 ) );
            comp[ncomp] = r;
            ++ncomp;
          } else if ( ncomp < 6 && k >= 2
                      && ( mp2 > 0.0 ) == ( mp1 > 0.0 )
                      && std::fabs( mp1 ) <= std::fabs( mp2 )
                      && std::fabs( mp1 ) <= std::fabs( mc ) ) {
            double lo = rp2, hi = rc;
            for ( int it = 0; it < 20; ++it ) {
              const double ra = lo + ( hi - lo )/3.0;
              const double rb = hi - ( hi - lo )/3.0;
              if ( std::fabs( mismatch( ra ) ) < std::fabs( mismatch( rb ) ) )
                hi = rb;
              else
                lo = ra;
            }
            const double r = 0.5*( lo + hi );
            const double thresh =
              4.0*( eps_e + eps_p*detail::dispersion_slope( r4_of( r ), n ) );
            if ( std::fabs( mismatch( r ) ) < thresh ) {
              // Width from the local curvature: covers the dip out to where
              // the smoothed delta has decayed, capped like the roots.
              const double h = std::max( 1e-3*r, 1e-6*r3max );
              const double curv =
                std::fabs( mismatch( r + h ) + mismatch( r - h ) - 2.0*mismatch( r ) )/( h*h );
              width[ncomp] =
                std::min( 0.25*r3max,
                          std::sqrt( 2.0*thresh
                                     /std::max( curv, 32.0*thresh/( r3max*r3max ) ) ) );
              comp[ncomp] = r;
              ++ncomp;
            }
          }
          rp2 = rp1;
          mp2 = mp1;
          rp1 = rc;
          mp1 = mc;
        }
      }
      const double pu = ncomp ? 0.25 : 0.5;
      const double pg = ncomp ? 0.5 : 0.0;
      const double span3 = std::log( r3max/rlo );
      double r3;
      {
        const double u = rng.uniform();
        if ( u < pu ) {
          r3 = r3max*rng.uniform_pos();
        } else if ( u < 2.0*pu ) {
          r3 = rlo*std::exp( span3*rng.uniform() );
        } else {
          const int j = std::min( ncomp - 1, int( rng.uniform()*ncomp ) );
          double g1, g2;
          rng.normal_pair( g1, g2 );
          r3 = comp[j] + width[j]*g1;
        }
      }
      if ( !( r3 > 0.0 ) )
        return 0.0;
      double q3 = 0.0;
      if ( r3 <= r3max ) {
        q3 += pu/r3max;
        if ( r3 >= rlo )
          q3 += pu/( r3*span3 );
      }
      for ( int j = 0; j < ncomp; ++j ) {
        const double t = ( r3 - comp[j] )/width[j];
        q3 += ( pg/ncomp )
              *std::exp( -0.5*t*t )/( width[j]*std::sqrt( 2.0*std::numbers::pi ) );
      }
      if ( !( q3 > 0.0 ) )
        return 0.0;
      const double w3m = 4.0*std::numbers::pi*r3*r3/q3;
      const double e3 = dispersion( r3, n );
      const detail::V3 c = { sv.x - r3*u3.x,
                             sv.y - r3*u3.y,
                             sv.z - r3*u3.z };
      double z1, z2, z3, zspare;
      rng.normal_pair( z1, z2 );
      rng.normal_pair( z3, zspare );
      const double base = w2m*w3m*fbe( e2 )*( 1.0 + fbe( e3 ) );
      // The integrand is 3<->4 symmetric, so restricting to r4 > r3 and
      // doubling is exact. It is also what keeps the weights bounded: the
      // infrared 1 + f(E4) enhancement diverges on the Gaussian-absorbed
      // leg, where no r^2 measure suppresses it, and re-enters through the
      // mirrored configuration on the r3 leg, where one does.
      double w[2];
      const double widths[2] = { 1.0, 0.5 };
      for ( int i = 0; i < 2; ++i ) {
        const double s = widths[i];
        const detail::V3 p4 = { c.x + s*eps_p*z1,
                                c.y + s*eps_p*z2,
                                c.z + s*eps_p*z3 };
        const double r4 = detail::norm3( p4 );
        if ( !( r4 > r3 ) ) {
          w[i] = 0.0;
          continue;
        }
        const double e4 = dispersion( r4, n );
        w[i] = 2.0*base*( 1.0 + fbe( e4 ) )
               *detail::gauss1( e1 + e2 - e3 - e4, s*eps_e );
      }
      return ( 4.0*w[1] - w[0] )/3.0;
    } );
    est.value *= scale;
    est.std_error *= scale;
    if ( !( est.std_error <= 0.05*std::fabs( est.value ) ) )
      throw NonConvergence( "mc_q_loss", est.value, est.std_error );
    return est;
  }

}

#endif
