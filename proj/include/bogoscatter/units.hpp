#ifndef bogoscatter_units_hpp
#define bogoscatter_units_hpp

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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

////////////////////////////////////////////////////////////////////////////////
//                                                                            //
// Physical-units layer: maps laboratory parameters (mass, bare scattering    //
// length, number density, temperature) onto the dimensionless condensate     //
// scale used everywhere else in this library.                                //
//                                                                            //
// Constants (CODATA 2018, full printed precision):                           //
//                                                                            //
//   hbar              1.054571817e-34   J s                                  //
//   k_B               1.380649e-23      J/K      (exact)                     //
//   m_e               9.1093837015e-31  kg                                   //
//   u                 1.66053906660e-27 kg                                   //
//   zeta(3/2)         2.6123753486854883                                     //
//                                                                            //
// The positronium mass is taken as 2 m_e; the 6.8 eV binding-energy mass     //
// defect is ~1e-5 relative and ignored.                                      //
//                                                                            //
// Note on the dilute-positronium condensation temperature: the closed        //
// formula below gives T_c ~ 3.2 K at 1e-4 nm^-3 with mass 2 m_e. Claims of   //
// ~30 K for the same density circulate; they are not reproducible from this  //
// formula and this mass, and nothing here depends on them.                   //
//                                                                            //
////////////////////////////////////////////////////////////////////////////////

namespace bogoscatter {

  namespace constants {
    inline constexpr double hbar = 1.054571817e-34;
    inline constexpr double boltzmann = 1.380649e-23;
    inline constexpr double electron_mass = 9.1093837015e-31;
    inline constexpr double atomic_mass_unit = 1.66053906660e-27;
    inline constexpr double zeta_three_halves = 2.6123753486854883;
  }

  // Exact decimal conversion, round trips to better than 1e-15 relative.
  inline constexpr double per_nm3_to_per_m3 = 1e27;

  struct PhysicalSpecies {
    std::string name;
    double mass = 0.0;         // kg
    double a0 = 0.0;           // bare s-wave scattering length, m
    double density_n = 0.0;    // total boson number density, m^-3
    double temperature = 0.0;  // K

    // Everything positive; the theory further assumes a dilute gas.
    void require_valid() const
    {
      if ( !( mass > 0.0 ) || !( a0 > 0.0 ) || !( density_n > 0.0 )
           || !( temperature > 0.0 ) )
        throw std::invalid_argument( "PhysicalSpecies: all parameters must be positive" );
    }

    double diluteness() const { return density_n*a0*a0*a0; }
    bool dilute() const { return diluteness() < 1e-2; }
  };

  struct DerivedScales {
    double t_c = 0.0;                 // condensation temperature, K
    double condensate_fraction = 0.0; // n_c / n
    double g = 0.0;                   // interaction strength, J m^3
    double e0 = 0.0;                  // g * n_c, J
    CondensateScale nbar { 0.0 };
    bool above_critical = false;
  };

  inline double critical_temperature( double density_n, double mass )
  {
    if ( !( density_n > 0.0 ) || !( mass > 0.0 ) )
      throw std::invalid_argument( "critical_temperature: need positive density and mass" );
    using namespace constants;
    const double x = density_n/zeta_three_halves;
    return ( 2.0*std::numbers::pi*hbar*hbar/( mass*boltzmann ) )*std::cbrt( x*x );
  }

  // Zero at and above the transition (the above-critical case is flagged by
  // derive_scales, not here).
  inline double condensate_fraction( double temperature, double t_c )
  {
    if ( !( temperature >= 0.0 ) || !( t_c > 0.0 ) )
      throw std::invalid_argument( "condensate_fraction: need T >= 0, Tc > 0" );
    if ( temperature >= t_c )
      return 0.0;
    const double r = temperature/t_c;
    return 1.0 - r*std::sqrt( r );
  }

  // Definitional chain: Tc from (n, m), fraction from (T, Tc), then
  // nbar = g n_c / k_B T with g = 4 pi hbar^2 a0 / m. This route is the
  // authoritative one; the rounded closed formula below exists as a
  // cross-check.
  inline DerivedScales derive_scales( const PhysicalSpecies& s )
  {
    s.require_valid();
    using namespace constants;
    DerivedScales d;
    d.t_c = critical_temperature( s.density_n, s.mass );
    d.condensate_fraction = condensate_fraction( s.temperature, d.t_c );
    d.above_critical = ( s.temperature >= d.t_c );
    d.g = 4.0*std::numbers::pi*hbar*hbar*s.a0/s.mass;
    d.e0 = d.g*( d.condensate_fraction*s.density_n );
    d.nbar = CondensateScale { d.e0/( boltzmann*s.temperature ) };
    return d;
  }

  inline CondensateScale scaled_density( const PhysicalSpecies& s )
  {
    return derive_scales( s ).nbar;
  }

  // Closed formula with the literature's rounded coefficient. The exact
  // coefficient is 2 zeta(3/2)^{2/3} = 3.7938; printed as 3.79 it agrees
  // with the chain to 0.1%.
  inline double scaled_density_formula( const PhysicalSpecies& s )
  {
    s.require_valid();
    const double t_c = critical_temperature( s.density_n, s.mass );
    if ( s.temperature >= t_c )
      return 0.0;
    const double r = s.temperature/t_c;
    return 3.79*( 1.0/r - std::sqrt( r ) )*s.a0*std::cbrt( s.density_n );
  }

  // Reference rows: one per published table entry, the positronium density
  // range represented by its two endpoints. All at a 50/50 mixture, i.e.
  // T = 2^{-2/3} Tc.
  inline std::vector<PhysicalSpecies> species_presets()
  {
    using namespace constants;
    const double mass_ps = 2.0*electron_mass;
    const double mass_rb = 86.909180531*atomic_mass_unit;
    const double mass_na = 22.9897692820*atomic_mass_unit;
    const double fifty_fifty = std::pow( 2.0, -2.0/3.0 );
    auto make = [&]( const char* name, double mass, double a0_nm, double n_nm3 ) {
      PhysicalSpecies s;
      s.name = name;
      s.mass = mass;
      s.a0 = a0_nm*1e-9;
      s.density_n = n_nm3*per_nm3_to_per_m3;
      s.temperature = fifty_fifty*critical_temperature( s.density_n, mass );
      return s;
    };
    return { make( "o-Ps", mass_ps, 0.16, 1e-7 ),
             make( "o-Ps", mass_ps, 0.16, 1e-3 ),
             make( "87Rb", mass_rb, 5.5, 1e-9 ),
             make( "23Na", mass_na, 4.5, 1e-9 ) };
  }

}

#endif
