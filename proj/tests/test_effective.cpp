
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

// Effective scattering ratios, their curves, the least-squares constant and
// the low-energy population report. Quadrature anchors are frozen outputs of
// this library at the default spec.

#include "bogoscatter/effective.hpp"
#include "catch2/catch_amalgamated.hpp"
#include <cmath>

using namespace bogoscatter;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
  const QuadratureSpec quad {};
}

TEST_CASE( "gas-gas ratio anchors", "[effective]" )
{
  auto a2 = []( double e, double nbar ) {
    const double a = alpha_T( e, { nbar }, quad );
    return a*a;
  };
  REQUIRE_THAT( a2( 1e-8, 1e-4 ), WithinRel( 2.0724520948374066, 1e-9 ) );
  REQUIRE_THAT( a2( 4e-6, 4e-2 ), WithinRel( 2.0745323844992636, 1e-9 ) );
  REQUIRE_THAT( a2( 4e-2, 4e-2 ), WithinRel( 1.6465248196198787, 1e-9 ) );
  REQUIRE_THAT( a2( 1.0, 4e-2 ), WithinRel( 0.98804068261733313, 1e-9 ) );
  REQUIRE_THAT( a2( 1e3, 1e-3 ), WithinRel( 0.99773386963746358, 1e-9 ) );
  REQUIRE_THAT( a2( 1e3, 4e-2 ), WithinRel( 0.98325748700686166, 1e-9 ) );
}

TEST_CASE( "gas-gas ratio limits", "[effective]" )
{
  // Phonon plateau above sqrt(2), free tail within 2 percent of 1. The
  // curve is NOT confined to [1, sqrt(2)]: the corner overshoots the
  // plateau and there is a shallow dip below 1 around E ~ 1. Both are real
  // features of the integrals; the assertions pin them down so an
  // accidental "fix" shows up here.
  const CondensateScale n { 4e-2 };
  const double corner = alpha_T( 4e-6, n, quad );
  REQUIRE( corner > std::sqrt( 2.0 ) );
  REQUIRE_THAT( corner, WithinRel( std::sqrt( 2.0 ), 0.05 ) );
  REQUIRE_THAT( alpha_T( 1e3, n, quad ), WithinRel( 1.0, 0.02 ) );
  const double dip = alpha_T( 1.0, n, quad );
  REQUIRE( dip < 1.0 );
  REQUIRE( dip > 0.99 );
  // Strictly decreasing through the crossover region.
  double prev = corner;
  for ( double e : { 1e-4, 1e-3, 1e-2, 4e-2, 0.2, 1.0 } ) {
    const double a = alpha_T( e, n, quad );
    REQUIRE( a < prev );
    prev = a;
  }
  REQUIRE_THROWS_AS( alpha_T( 0.0, n, quad ), std::invalid_argument );
  REQUIRE_THROWS_AS( alpha_T( 1.0, { 0.0 }, quad ), std::invalid_argument );
}

TEST_CASE( "midpoint of the crossover tracks the condensate scale", "[effective]" )
{
  // The energy where alpha_T crosses the midpoint (1+sqrt(2))/2 of its
  // nominal range sits at E ~ 1.6 nbar across two decades of nbar.
  const double mid = 0.5*( 1.0 + std::sqrt( 2.0 ) );
  for ( double nbar : { 1e-4, 4e-2 } ) {
    const CondensateScale n { nbar };
    double lo = 0.1*nbar, hi = 100.0*nbar;
    for ( int i = 0; i < 40; ++i ) {
      const double m = std::sqrt( lo*hi );
      ( alpha_T( m, n, quad ) > mid ? lo : hi ) = m;
    }
    const double e_mid = std::sqrt( lo*hi );
    REQUIRE( e_mid/nbar > 1.0 );
    REQUIRE( e_mid/nbar < 2.5 );
  }
}

TEST_CASE( "gas-condensate ratio anchors", "[effective]" )
{
  REQUIRE_THAT( alpha_S( 4e-6, { 4e-2 }, AlphaSMode::Consistent, quad ),
                WithinRel( 0.11481857161049525, 1e-9 ) );
  REQUIRE_THAT( alpha_S( 4e-2, { 4e-2 }, AlphaSMode::Consistent, quad ),
                WithinRel( 0.17170794420096211, 1e-9 ) );
  REQUIRE_THAT( alpha_S( 1.0, { 4e-2 }, AlphaSMode::Consistent, quad ),
                WithinRel( 0.63947240186180798, 1e-9 ) );
  REQUIRE_THAT( alpha_S( 1.0, { 1e-8 }, AlphaSMode::Consistent, quad ),
                WithinRel( 0.9331007357964457, 1e-9 ) );
  REQUIRE_THAT( alpha_S( 1.0, { 4e-2 }, AlphaSMode::AsPrinted, quad ),
                WithinRel( 1.8039945012679486, 1e-9 ) );
  REQUIRE_THAT( alpha_S( 1.0, { 1e-8 }, AlphaSMode::AsPrinted, quad ),
                WithinRel( 1.0607529822796951, 1e-9 ) );
}

TEST_CASE( "gas-condensate ratio shape", "[effective]" )
{
  // Consistent mode: deep suppression in the phonon region, recovery toward
  // 1 from below at high energy. The interior minimum is NOT at E ~ nbar:
  // the curve is already rising there.
  const CondensateScale n { 4e-2 };
  REQUIRE( alpha_S( 4e-6, n, AlphaSMode::Consistent, quad ) < 0.2 );
  REQUIRE_THAT( alpha_S( 10.0, n, AlphaSMode::Consistent, quad ),
                WithinRel( 0.80087620420745398, 1e-9 ) );
  REQUIRE_THAT( alpha_S( 1e3, n, AlphaSMode::Consistent, quad ),
                WithinRel( 0.99483974442443823, 1e-9 ) );
  // Shallow interior minimum near E ~ 0.15 nbar, well below the condensate
  // scale itself...
  const double at_min = alpha_S( 6e-3, n, AlphaSMode::Consistent, quad );
  REQUIRE( at_min < alpha_S( 4e-6, n, AlphaSMode::Consistent, quad ) );
  REQUIRE( at_min < alpha_S( 2e-2, n, AlphaSMode::Consistent, quad ) );
  // ...then monotone increasing through the crossover.
  double prev = at_min;
  for ( double e : { 1e-2, 0.1, 1.0, 10.0, 100.0 } ) {
    const double a = alpha_S( e, n, AlphaSMode::Consistent, quad );
    REQUIRE( a > prev );
    REQUIRE( a < 1.0 );
    prev = a;
  }
  REQUIRE_THROWS_AS( alpha_S( 1.0, { 0.0 }, AlphaSMode::Consistent, quad ),
                     std::invalid_argument );
}

TEST_CASE( "curve grids and validation", "[effective]" )
{
  CurveGridSpec grid;
  grid.emin_frac = 1e-3;
  grid.emax = 10.0;
  grid.points = 7;
  const auto e = grid.energies( 4e-2 );
  REQUIRE( e.size() == 7 );
  REQUIRE_THAT( e.front(), WithinRel( 4e-5, 1e-12 ) );
  REQUIRE_THAT( e.back(), WithinRel( 10.0, 1e-12 ) );
  for ( std::size_t i = 1; i < e.size(); ++i )
    REQUIRE( e[i] > e[i-1] );
  CurveGridSpec bad = grid;
  bad.points = 1;
  REQUIRE_THROWS_AS( bad.energies( 4e-2 ), std::invalid_argument );
  bad = grid;
  bad.emax = 1e-9;
  REQUIRE_THROWS_AS( bad.energies( 4e-2 ), std::invalid_argument );

  // The T-curve around E ~ 1 dips below the [1,2] band and validate() must
  // say so rather than silently accepting.
  CurveGridSpec dipg;
  dipg.emin_frac = 10.0;     // 0.4 .. 2 at nbar = 4e-2
  dipg.emax = 2.0;
  dipg.points = 4;
  const auto tc = alpha_T_curve( { 4e-2 }, dipg, quad );
  const auto warnings = tc.validate();
  REQUIRE_FALSE( warnings.empty() );
  REQUIRE( warnings.front().find( "alpha_T out of [1,2] band" ) != std::string::npos );

  // The as-printed S-curve exceeds 1 near E ~ 1 and is flagged too.
  CurveGridSpec sg;
  sg.emin_frac = 25.0;       // exactly E = 1 at nbar = 4e-2
  sg.emax = 2.0;
  sg.points = 2;
  const auto sc = alpha_S_curve( { 4e-2 }, sg, quad, AlphaSMode::AsPrinted );
  const auto sw = sc.validate();
  REQUIRE_FALSE( sw.empty() );
  REQUIRE( sw.front().find( "alpha_S above 1" ) != std::string::npos );

  // A clean consistent-mode curve validates clean.
  const auto cc = alpha_S_curve( { 4e-2 }, sg, quad, AlphaSMode::Consistent );
  REQUIRE( cc.validate().empty() );
}

TEST_CASE( "curves are thread-count invariant", "[effective]" )
{
  CurveGridSpec grid;
  grid.emin_frac = 1e-2;
  grid.emax = 100.0;
  grid.points = 6;
  const auto serial = alpha_T_curve( { 4e-2 }, grid, quad, KernelForm::AsPrinted, 1 );
  const auto parallel = alpha_T_curve( { 4e-2 }, grid, quad, KernelForm::AsPrinted, 3 );
  REQUIRE( serial.alpha.size() == parallel.alpha.size() );
  for ( std::size_t i = 0; i < serial.alpha.size(); ++i )
    REQUIRE( serial.alpha[i] == parallel.alpha[i] );
}

TEST_CASE( "least-squares constant", "[effective]" )
{
  REQUIRE_THAT( sigma0_T( { 4e-2 }, quad ), WithinRel( 1.3603133132360501, 1e-9 ) );
  REQUIRE_THAT( sigma0_T( { 1e-8 }, quad ), WithinRel( 1.3433064222711775, 1e-9 ) );
  REQUIRE_THAT( sigma0_T( { 4e-2 }, quad, DosForm::AsPrinted ),
                WithinRel( 1.8968280008069565, 1e-9 ) );
  REQUIRE_THAT( sigma0_T_unit_weight( { 4e-2 }, quad ),
                WithinRel( 2.0745520058621252, 1e-9 ) );
  REQUIRE_THROWS_AS( sigma0_T( { 0.0 }, quad ), std::invalid_argument );
}

TEST_CASE( "least-squares constant is sandwiched and has the fixed point", "[effective]" )
{
  // The fit of a ratio of positive moments cannot leave the range of
  // alpha_T^2 over the thermal support.
  const CondensateScale n { 4e-2 };
  const double s = sigma0_T( n, quad );
  double lo = 1e30, hi = -1e30;
  for ( double e : { 4e-6, 4e-4, 4e-2, 0.4, 1.0, 4.0, 40.0 } ) {
    const double a = alpha_T( e, n, quad );
    lo = std::min( lo, a*a );
    hi = std::max( hi, a*a );
  }
  REQUIRE( s >= lo );
  REQUIRE( s <= hi );

  // Constant kernel: exact fixed point of the least-squares fit.
  const double c = 1.7;
  const double fp = detail::sigma0_impl(
    n, quad, [&]( double e ) { return dos_shape( e, n ); },
    [&]( double, double, double, double ) { return c; } );
  REQUIRE_THAT( fp, WithinRel( c, 1e-10 ) );
}

TEST_CASE( "population report", "[effective]" )
{
  const auto r = population_report( { 4e-2 }, 1.05, DosForm::DerivedFromDispersion, quad );
  REQUIRE_FALSE( r.empty_region );
  REQUIRE_THAT( r.e_star, WithinRel( 0.20816050753007148, 1e-7 ) );
  REQUIRE_THAT( r.n_l, WithinRel( 0.23045583831259725, 1e-7 ) );
  REQUIRE_THAT( r.a_eff_l_over_a0, WithinRel( 1.1555263421799706, 1e-7 ) );
  REQUIRE_THAT( r.mean_alpha_t, WithinRel( 1.0375042322672305, 1e-7 ) );
  REQUIRE_THAT( r.mean_alpha_s, WithinRel( 0.5374593717164512, 1e-7 ) );

  // The printed shell weight concentrates the population at low energy;
  // both headline numbers move far outside the derived-form values.
  const auto rp = population_report( { 4e-2 }, 1.05, DosForm::AsPrinted, quad );
  REQUIRE_THAT( rp.n_l, WithinRel( 0.81012303764130766, 1e-7 ) );
  REQUIRE_THAT( rp.a_eff_l_over_a0, WithinRel( 1.2768589990284529, 1e-7 ) );

  // Threshold above the whole curve: empty region reported as such.
  const auto re = population_report( { 4e-2 }, 3.0, DosForm::DerivedFromDispersion, quad );
  REQUIRE( re.empty_region );
  REQUIRE( re.e_star == 0.0 );
}

TEST_CASE( "low-energy fraction scales as sqrt of the condensate", "[effective]" )
{
  // n_l ~ nbar^(1/2): the threshold energy tracks nbar and the thermal
  // weight integrand is flat there. Two decades apart, the log-log slope
  // must sit near one half.
  const double n_lo = low_energy_fraction( { 1e-4 }, 1.05,
                                           DosForm::DerivedFromDispersion, quad );
  const double n_hi = low_energy_fraction( { 1e-2 }, 1.05,
                                           DosForm::DerivedFromDispersion, quad );
  const double slope = std::log( n_hi/n_lo )/std::log( 1e-2/1e-4 );
  REQUIRE_THAT( slope, WithinAbs( 0.5, 0.1 ) );
}
