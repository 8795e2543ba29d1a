#ifndef bogoscatter_cli_support_hpp
#define bogoscatter_cli_support_hpp

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

#include "bogoscatter/version.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

////////////////////////////////////////////////////////////////////////////////
//                                                                            //
// Plumbing shared by the command-line tool and its tests: the CSV output     //
// contract (metadata block, header, 17-significant-digit fields, LF line     //
// endings), small value parsers for the flag grammar, and a content-hashed   //
// curve cache.                                                               //
//                                                                            //
// Everything here is deterministic by construction: a given effective        //
// config always serializes to the same bytes, which both makes reruns        //
// byte-identical and doubles as the cache key.                               //
//                                                                            //
////////////////////////////////////////////////////////////////////////////////

namespace bogoscatter::cli {

  // 17 significant digits round-trip any double exactly; %g keeps integral
  // values free of trailing zeros so the files stay readable.
  inline std::string format_double( double v )
  {
    char buf[64];
    std::snprintf( buf, sizeof buf, "%.17g", v );
    return buf;
  }

  // Shortest form, for labels and identifiers; data columns use
  // format_double.
  inline std::string format_short( double v )
  {
    char buf[64];
    std::snprintf( buf, sizeof buf, "%g", v );
    return buf;
  }

  inline std::string format_unsigned( std::uint64_t v )
  {
    char buf[32];
    std::snprintf( buf, sizeof buf, "%llu", static_cast<unsigned long long>( v ) );
    return buf;
  }

  // RFC-4180 quoting, applied only when the field needs it (commas, quotes,
  // line breaks). Numeric fields never do, so the common case stays clean.
  inline std::string csv_field( const std::string& s )
  {
    if ( s.find_first_of( ",\"\r\n" ) == std::string::npos )
      return s;
    std::string out( "\"" );
    for ( char c : s ) {
      if ( c == '"' )
        out += '"';
      out += c;
    }
    out += '"';
    return out;
  }

  inline std::string join_doubles( const std::vector<double>& vs )
  {
    std::string out;
    for ( std::size_t i = 0; i < vs.size(); ++i ) {
      if ( i )
        out += ',';
      out += format_double( vs[i] );
    }
    return out;
  }

  // FNV-1a, 64 bit. Content addressing only; not cryptographic and does not
  // need to be.
  inline std::uint64_t fnv1a64( const std::string& data )
  {
    std::uint64_t h = 1469598103934665603ull;
    for ( unsigned char c : data ) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  inline std::string hex16( std::uint64_t v )
  {
    char buf[17];
    std::snprintf( buf, sizeof buf, "%016llx", static_cast<unsigned long long>( v ) );
    return buf;
  }

  // One key = value pair of the effective config. Only value-affecting
  // settings belong here -- thread counts, output paths and cache switches
  // must never change the emitted bytes, so they are never echoed.
  using MetaEntries = std::vector<std::pair<std::string, std::string>>;

  inline std::string metadata_text( const std::string& subcommand, const MetaEntries& entries )
  {
    std::string out = "# bogoscatter " + subcommand + "\n";
    out += "# version = ";
    out += version_string;
    out += '\n';
    for ( const auto& [k, v] : entries )
      out += "# " + k + " = " + v + "\n";
    return out;
  }

  inline std::string assemble_csv( const std::string& subcommand, const MetaEntries& entries,
                                   const std::string& header, const std::vector<std::string>& rows )
  {
    std::string out = metadata_text( subcommand, entries );
    out += header;
    out += '\n';
    for ( const auto& r : rows ) {
      out += r;
      out += '\n';
    }
    return out;
  }

  //////////////////////////////////////////////////////////////////////////////
  // Flag-value parsers. All throw std::invalid_argument with the offending
  // text; the tool maps that to the config-error exit code.

  inline double parse_one_double( const std::string& s )
  {
    const char * begin = s.c_str();
    char * end = nullptr;
    const double v = std::strtod( begin, &end );
    if ( end == begin || end != begin + s.size() )
      throw std::invalid_argument( "not a number: '" + s + "'" );
    return v;
  }

  inline std::vector<double> parse_double_list( const std::string& s )
  {
    std::vector<double> out;
    std::stringstream ss( s );
    std::string item;
    while ( std::getline( ss, item, ',' ) )
      out.push_back( parse_one_double( item ) );
    if ( out.empty() )
      throw std::invalid_argument( "empty list: '" + s + "'" );
    return out;
  }

  // "lo:hi:count" -> count log-spaced points, endpoints included.
  inline std::vector<double> parse_log_range( const std::string& s )
  {
    std::vector<std::string> parts;
    std::stringstream ss( s );
    std::string item;
    while ( std::getline( ss, item, ':' ) )
      parts.push_back( item );
    if ( parts.size() != 3 )
      throw std::invalid_argument( "expected lo:hi:count, got '" + s + "'" );
    const double lo = parse_one_double( parts[0] );
    const double hi = parse_one_double( parts[1] );
    const double cnt = parse_one_double( parts[2] );
    const int count = static_cast<int>( cnt );
    if ( !( lo > 0.0 ) || !( hi > lo ) || count < 2 || cnt != count )
      throw std::invalid_argument( "need 0 < lo < hi and an integer count >= 2 in '" + s + "'" );
    std::vector<double> out( static_cast<std::size_t>( count ) );
    const double step = std::log( hi/lo )/( count - 1 );
    for ( int i = 0; i < count; ++i )
      out[static_cast<std::size_t>( i )] = lo*std::exp( step*i );
    out.front() = lo;
    out.back() = hi;
    return out;
  }

  // Number densities accept an optional unit suffix: "1e-3nm-3" (per cubic
  // nanometre) or "1e23m-3" (per cubic metre, also the bare default).
  inline double parse_density( const std::string& s )
  {
    const char * begin = s.c_str();
    char * end = nullptr;
    const double v = std::strtod( begin, &end );
    if ( end == begin )
      throw std::invalid_argument( "not a density: '" + s + "'" );
    const std::string suffix( end );
    if ( suffix.empty() || suffix == "m-3" )
      return v;
    if ( suffix == "nm-3" )
      return v*1e27;
    throw std::invalid_argument( "unknown density unit '" + suffix + "' (use m-3 or nm-3)" );
  }

  //////////////////////////////////////////////////////////////////////////////
  // Curve cache: one file per curve, hash-named, holding the exact CSV bytes
  // the curve contributes (its own metadata block, the column header, then
  // the data rows). Keyed by a hash of the per-curve config text, which
  // embeds the library version, so a version bump invalidates everything.

  struct CacheConfig {
    std::filesystem::path dir;
    bool enabled = false;
  };

  inline CacheConfig resolve_cache( const std::string& flag_dir, bool no_cache )
  {
    CacheConfig c;
    if ( no_cache )
      return c;
    if ( !flag_dir.empty() ) {
      c.dir = flag_dir;
    } else if ( const char * env = std::getenv( "BOGOSCATTER_CACHE_DIR" ); env && *env ) {
      c.dir = env;
    } else if ( const char * home = std::getenv( "HOME" ); home && *home ) {
      c.dir = std::filesystem::path( home )/".cache"/"bogoscatter";
    } else {
      c.dir = std::filesystem::path( ".bogoscatter-cache" );
    }
    c.enabled = true;
    return c;
  }

  inline std::filesystem::path cache_path( const CacheConfig& cache, const std::string& key_text )
  {
    return cache.dir/( hex16( fnv1a64( key_text ) ) + ".csv" );
  }

  // Data rows of a cached curve file: everything after the header line,
  // which is the first line not starting with '#'.
  inline std::optional<std::vector<std::string>> cache_read_rows( const CacheConfig& cache,
                                                                  const std::string& key_text )
  {
    if ( !cache.enabled )
      return std::nullopt;
    std::ifstream in( cache_path( cache, key_text ), std::ios::binary );
    if ( !in )
      return std::nullopt;
    std::vector<std::string> rows;
    std::string line;
    bool past_header = false;
    while ( std::getline( in, line ) ) {
      if ( !line.empty() && line.back() == '\r' )
        line.pop_back();
      if ( !line.empty() && line.front() == '#' )
        continue;
      if ( !past_header ) {
        past_header = true;
        continue;
      }
      if ( !line.empty() )
        rows.push_back( line );
    }
    if ( !past_header )
      return std::nullopt;
    return rows;
  }

  // Atomic publish (write-then-rename) so a concurrent reader never sees a
  // truncated curve.
  inline void cache_write( const CacheConfig& cache, const std::string& key_text,
                           const std::string& content )
  {
    if ( !cache.enabled )
      return;
    std::error_code ec;
    std::filesystem::create_directories( cache.dir, ec );
    if ( ec )
      return;
    const auto final_path = cache_path( cache, key_text );
    const auto tmp_path = final_path.string() + ".tmp";
    {
      std::ofstream out( tmp_path, std::ios::binary );
      if ( !out )
        return;
      out.write( content.data(), static_cast<std::streamsize>( content.size() ) );
      if ( !out )
        return;
    }
    std::filesystem::rename( tmp_path, final_path, ec );
  }

  // Per-curve fetch-or-compute. The compute callback returns finished row
  // strings, so cached and fresh results are byte-identical by construction.
  template <typename Compute>
  std::vector<std::string> cached_rows( const CacheConfig& cache, const std::string& subcommand,
                                        const MetaEntries& curve_meta, const std::string& header,
                                        Compute&& compute )
  {
    const std::string key_text = metadata_text( subcommand, curve_meta );
    if ( auto hit = cache_read_rows( cache, key_text ) )
      return *hit;
    std::vector<std::string> rows = compute();
    cache_write( cache, key_text, assemble_csv( subcommand, curve_meta, header, rows ) );
    return rows;
  }

}

#endif
