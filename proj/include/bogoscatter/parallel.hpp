#ifndef bogoscatter_parallel_hpp
#define bogoscatter_parallel_hpp

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

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bogoscatter {

  namespace detail {

    // Maps grid indices over a small worker pool; results land at their own
    // index, so assembly order (and output bytes) never depend on the pool
    // size. The first worker exception wins and is rethrown after join.
    template <class Fn>
    void parallel_grid( std::size_t count, unsigned threads, Fn&& fn )
    {
      unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
      if ( nthreads < 1 )
        nthreads = 1;
      if ( nthreads == 1 || count < 2 ) {
        for ( std::size_t i = 0; i < count; ++i )
          fn( i );
        return;
      }
      std::atomic<std::size_t> next { 0 };
      std::exception_ptr err;
      std::once_flag err_once;
      auto worker = [&] {
        for ( ;; ) {
          const std::size_t i = next.fetch_add( 1 );
          if ( i >= count )
            return;
          try {
            fn( i );
          } catch ( ... ) {
            std::call_once( err_once, [&] { err = std::current_exception(); } );
            return;
          }
        }
      };
      std::vector<std::thread> pool;
      for ( unsigned t = 0; t < nthreads; ++t )
        pool.emplace_back( worker );
      for ( auto& t : pool )
        t.join();
      if ( err )
        std::rethrow_exception( err );
    }

  }

}

#endif
