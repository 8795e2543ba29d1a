#ifndef bogoscatter_distribution_hpp
#define bogoscatter_distribution_hpp

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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bogoscatter {

  // Isotropic quasi-particle occupation f(E). Either the analytic (possibly
  // scaled) Bose-Einstein equilibrium, or a tabulated curve on a strictly
  // increasing energy grid with log-linear interpolation between nodes
  // (linear where a node value is 0, so interpolation can never overshoot
  // below zero), a 1/E power law below the grid and exponential decay above
  // it.
  class IsotropicDistribution {
  public:
    enum class Kind { BoseEinstein, Tabulated };

    static IsotropicDistribution bose_einstein_equilibrium( double scale = 1.0 )
    {
      IsotropicDistribution d;
      d.m_kind = Kind::BoseEinstein;
      d.m_be_scale = scale;
      return d;
    }

    static IsotropicDistribution tabulated( std::vector<double> grid,
                                            std::vector<double> values )
    {
      if ( grid.size() != values.size() || grid.size() < 2 )
        throw std::invalid_argument( "IsotropicDistribution: need matching grid/values, >= 2 nodes" );
      for ( std::size_t i = 0; i < grid.size(); ++i ) {
        if ( i && !( grid[i] > grid[i-1] ) )
          throw std::invalid_argument( "IsotropicDistribution: grid must be strictly increasing" );
        if ( !( grid[i] > 0.0 ) || !std::isfinite( values[i] ) || values[i] < 0.0 )
          throw std::invalid_argument( "IsotropicDistribution: nodes must be positive, values finite and >= 0" );
      }
      IsotropicDistribution d;
      d.m_kind = Kind::Tabulated;
      d.m_grid = std::move( grid );
      d.m_values = std::move( values );
      return d;
    }

    Kind kind() const noexcept { return m_kind; }
    double be_scale() const noexcept { return m_be_scale; }

    // Occupation at energy e > 0.
    double value( double e ) const
    {
      if ( m_kind == Kind::BoseEinstein )
        return m_be_scale*bose_einstein( e );
      if ( e < m_grid.front() )
        return m_values.front()*m_grid.front()/e;
      if ( e > m_grid.back() )
        return m_values.back()*std::exp( m_grid.back() - e );
      auto it = std::lower_bound( m_grid.begin(), m_grid.end(), e );
      std::size_t hi = static_cast<std::size_t>( it - m_grid.begin() );
      if ( hi == 0 )
        return m_values.front();
      const std::size_t lo = hi - 1;
      const double fl = m_values[lo], fh = m_values[hi];
      const double t = ( std::log( e ) - std::log( m_grid[lo] ) )
                     / ( std::log( m_grid[hi] ) - std::log( m_grid[lo] ) );
      if ( fl > 0.0 && fh > 0.0 )
        return std::exp( ( 1.0 - t )*std::log( fl ) + t*std::log( fh ) );
      return ( 1.0 - t )*fl + t*fh;
    }

    // f(E)*chi(E) and (1+f(E))*chi(E), the combinations the collision
    // integrands consume; routed through the pole-free closed forms for the
    // equilibrium kind so that the f_BE pole at E -> 0 never surfaces.
    double occ_chi( double e, CondensateScale n ) const
    {
      if ( m_kind == Kind::BoseEinstein )
        return m_be_scale*detail::occ_chi( e, n.nbar );
      return value( e )*chi_weight( e, n );
    }

    double occp1_chi( double e, CondensateScale n ) const
    {
      if ( m_kind == Kind::BoseEinstein )
        return chi_weight( e, n ) + m_be_scale*detail::occ_chi( e, n.nbar );
      return ( 1.0 + value( e ) )*chi_weight( e, n );
    }

    // log((1+f)/f), +inf where f vanishes. For the equilibrium kind this is
    // log1p(expm1(E)/scale), which at scale 1 reduces to E up to an ulp --
    // the property the collision brackets rely on for their stable
    // gain/loss cancellation.
    double log_ratio( double e ) const
    {
      if ( m_kind == Kind::BoseEinstein )
        return std::log1p( std::expm1( e )/m_be_scale );
      const double v = value( e );
      return v > 0.0 ? std::log1p( 1.0/v )
                     : std::numeric_limits<double>::infinity();
    }

  private:
    IsotropicDistribution() = default;
    Kind m_kind = Kind::BoseEinstein;
    double m_be_scale = 1.0;
    std::vector<double> m_grid;
    std::vector<double> m_values;
  };

}

#endif
