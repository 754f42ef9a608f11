/*!
  \file sat_solver.hpp
  \brief Small conflict-driven clause-learning SAT solver

  Two watched literals, first-UIP learning with clause minimization,
  activity-based decisions with phase saving, Luby restarts and periodic
  removal of inactive learned clauses.  Nothing depends on timing or
  addresses, so every run on the same clauses is identical.
*/

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace sfqlec
{

enum class sat_result
{
  sat,
  unsat,
  unknown
};

struct sat_limits
{
  /*! \brief Maximum number of conflicts, 0 for none. */
  uint64_t conflicts{ 0u };
  /*! \brief Wall-clock budget in seconds, 0 for none. */
  double seconds{ 0.0 };
};

struct sat_stats
{
  uint64_t decisions{ 0u };
  uint64_t conflicts{ 0u };
  uint64_t propagations{ 0u };
  uint64_t learned{ 0u };
  uint64_t restarts{ 0u };
};

class sat_solver
{
  static constexpr uint32_t no_reason = static_cast<uint32_t>( -1 );
  static constexpr uint32_t not_in_heap = static_cast<uint32_t>( -1 );

  struct clause
  {
    std::vector<uint32_t> lits;
    double activity{ 0.0 };
    bool learnt{ false };
    bool deleted{ false };
  };

public:
  /*! \brief Variables are numbered 1..num_vars as in DIMACS. */
  explicit sat_solver( uint32_t num_vars )
      : num_vars_( num_vars ), assign_( num_vars + 1u, 0 ), level_( num_vars + 1u, 0u ), reason_( num_vars + 1u, no_reason ),
        seen_( num_vars + 1u, 0u ), watches_( 2u * ( num_vars + 1u ) ), activity_( num_vars + 1u, 0.0 ), phase_( num_vars + 1u, 0u ),
        heap_pos_( num_vars + 1u, not_in_heap )
  {
    for ( uint32_t v = 1; v <= num_vars; ++v )
    {
      heap_insert( v );
    }
  }

  uint32_t num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return num_original_; }
  sat_stats const& stats() const { return stats_; }

  /*! \brief Adds a clause of DIMACS literals; must be called before `solve`. */
  void add_clause( std::vector<int> const& dimacs )
  {
    ++num_original_;
    if ( inconsistent_ )
    {
      return;
    }
    std::vector<uint32_t> c;
    for ( auto d : dimacs )
    {
      auto const v = static_cast<uint32_t>( std::abs( d ) );
      if ( d == 0 || v > num_vars_ )
      {
        throw std::invalid_argument( "clause literal out of range" );
      }
      c.push_back( 2u * v + ( d < 0 ? 1u : 0u ) );
    }
    std::sort( c.begin(), c.end() );
    c.erase( std::unique( c.begin(), c.end() ), c.end() );
    std::vector<uint32_t> kept;
    for ( std::size_t i = 0; i < c.size(); ++i )
    {
      if ( i + 1u < c.size() && c[i + 1u] == ( c[i] ^ 1u ) )
      {
        return; /* tautology */
      }
      auto const val = value( c[i] );
      if ( val > 0 )
      {
        return;
      }
      if ( val == 0 )
      {
        kept.push_back( c[i] );
      }
    }
    if ( kept.empty() )
    {
      inconsistent_ = true;
      return;
    }
    if ( kept.size() == 1u )
    {
      enqueue( kept[0], no_reason );
      if ( propagate() != no_reason )
      {
        inconsistent_ = true;
      }
      return;
    }
    attach( std::move( kept ), false );
  }

  /*! \brief Solves under `assumptions` (DIMACS literals); `unsat` may be relative to them.
   *
   * Limits apply to this call only.  The model of a `sat` answer stays
   * readable until the next call.
   */
  sat_result solve( sat_limits const& limits = {}, std::vector<int> const& assumptions = {} )
  {
    cancel_until( 0u );
    if ( inconsistent_ )
    {
      return sat_result::unsat;
    }
    std::vector<uint32_t> assume;
    for ( auto d : assumptions )
    {
      auto const v = static_cast<uint32_t>( std::abs( d ) );
      if ( d == 0 || v > num_vars_ )
      {
        throw std::invalid_argument( "assumption literal out of range" );
      }
      assume.push_back( 2u * v + ( d < 0 ? 1u : 0u ) );
    }
    auto const conflicts_before = stats_.conflicts;
    auto const start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
      return limits.seconds > 0.0 && std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count() > limits.seconds;
    };

    uint64_t restart_budget = restart_unit * luby( stats_.restarts );
    uint64_t since_restart = 0u;
    max_learnts_ = std::max<std::size_t>( num_original_ / 3u, 2000u );

    for ( uint64_t steps = 0;; ++steps )
    {
      auto const confl = propagate();
      if ( confl != no_reason )
      {
        ++stats_.conflicts;
        ++since_restart;
        if ( decision_level() == 0u )
        {
          inconsistent_ = true;
          return sat_result::unsat;
        }
        uint32_t back = 0u;
        auto learnt = analyze( confl, back );
        cancel_until( back );
        if ( learnt.size() == 1u )
        {
          enqueue( learnt[0], no_reason );
        }
        else
        {
          auto const lit = learnt[0];
          auto const cref = attach( std::move( learnt ), true );
          bump_clause( cref );
          enqueue( lit, cref );
        }
        ++stats_.learned;
        var_inc_ /= var_decay;
        clause_inc_ /= clause_decay;
        if ( limits.conflicts != 0u && stats_.conflicts - conflicts_before >= limits.conflicts )
        {
          return sat_result::unknown;
        }
      }
      else
      {
        if ( since_restart >= restart_budget )
        {
          ++stats_.restarts;
          since_restart = 0u;
          restart_budget = restart_unit * luby( stats_.restarts );
          cancel_until( 0u );
        }
        if ( decision_level() == 0u && learnts_.size() >= max_learnts_ + trail_.size() )
        {
          reduce_learnts();
          max_learnts_ += max_learnts_ / 10u;
        }
        uint32_t lit = 0u;
        while ( lit == 0u && decision_level() < assume.size() )
        {
          auto const p = assume[decision_level()];
          if ( value( p ) < 0 )
          {
            return sat_result::unsat;
          }
          if ( value( p ) > 0 )
          {
            trail_lim_.push_back( static_cast<uint32_t>( trail_.size() ) );
          }
          else
          {
            lit = p;
          }
        }
        if ( lit == 0u )
        {
          auto const v = next_decision();
          if ( v == 0u )
          {
            return sat_result::sat;
          }
          lit = 2u * v + ( phase_[v] ? 0u : 1u );
        }
        ++stats_.decisions;
        trail_lim_.push_back( static_cast<uint32_t>( trail_.size() ) );
        enqueue( lit, no_reason );
      }
      if ( ( steps & 255u ) == 0u && out_of_time() )
      {
        return sat_result::unknown;
      }
    }
  }

  /*! \brief Model value of `var` after a `sat` answer (unassigned counts as false). */
  bool model_value( uint32_t var ) const { return assign_[var] > 0; }

private:
  static constexpr double var_decay = 0.95;
  static constexpr double clause_decay = 0.999;
  static constexpr uint64_t restart_unit = 100u;

  /* i-th element (from 0) of the Luby sequence 1 1 2 1 1 2 4 ... */
  static uint64_t luby( uint64_t i )
  {
    uint64_t size = 1u, seq = 0u;
    while ( size < i + 1u )
    {
      ++seq;
      size = 2u * size + 1u;
    }
    while ( size - 1u != i )
    {
      size = ( size - 1u ) / 2u;
      --seq;
      i %= size;
    }
    return uint64_t{ 1 } << seq;
  }

  int8_t value( uint32_t lit ) const
  {
    auto const a = assign_[lit >> 1];
    return ( lit & 1u ) ? static_cast<int8_t>( -a ) : a;
  }

  uint32_t decision_level() const { return static_cast<uint32_t>( trail_lim_.size() ); }

  uint32_t attach( std::vector<uint32_t> c, bool learnt )
  {
    auto const cref = static_cast<uint32_t>( clauses_.size() );
    watches_[c[0]].push_back( cref );
    watches_[c[1]].push_back( cref );
    clauses_.push_back( { std::move( c ), 0.0, learnt, false } );
    if ( learnt )
    {
      learnts_.push_back( cref );
    }
    return cref;
  }

  void enqueue( uint32_t lit, uint32_t reason )
  {
    auto const v = lit >> 1;
    assign_[v] = ( lit & 1u ) ? -1 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back( lit );
  }

  uint32_t propagate()
  {
    while ( qhead_ < trail_.size() )
    {
      auto const false_lit = trail_[qhead_++] ^ 1u;
      ++stats_.propagations;
      auto& ws = watches_[false_lit];
      std::size_t i = 0, j = 0;
      while ( i < ws.size() )
      {
        auto const cref = ws[i++];
        auto& cl = clauses_[cref];
        if ( cl.deleted )
        {
          continue;
        }
        auto& c = cl.lits;
        if ( c[0] == false_lit )
        {
          std::swap( c[0], c[1] );
        }
        if ( value( c[0] ) > 0 )
        {
          ws[j++] = cref;
          continue;
        }
        bool moved = false;
        for ( std::size_t k = 2; k < c.size(); ++k )
        {
          if ( value( c[k] ) >= 0 )
          {
            std::swap( c[1], c[k] );
            watches_[c[1]].push_back( cref );
            moved = true;
            break;
          }
        }
        if ( moved )
        {
          continue;
        }
        ws[j++] = cref;
        if ( value( c[0] ) < 0 )
        {
          while ( i < ws.size() )
          {
            ws[j++] = ws[i++];
          }
          ws.resize( j );
          qhead_ = trail_.size();
          return cref;
        }
        enqueue( c[0], cref );
      }
      ws.resize( j );
    }
    return no_reason;
  }

  /* whether `lit` is implied by the other literals of the learned clause */
  bool redundant( uint32_t lit )
  {
    auto const r = reason_[lit >> 1];
    if ( r == no_reason )
    {
      return false;
    }
    auto const& c = clauses_[r].lits;
    for ( std::size_t k = 1; k < c.size(); ++k )
    {
      auto const v = c[k] >> 1;
      if ( !seen_[v] && level_[v] > 0u )
      {
        return false;
      }
    }
    return true;
  }

  std::vector<uint32_t> analyze( uint32_t confl, uint32_t& back_level )
  {
    std::vector<uint32_t> learnt{ 0u };
    uint32_t path = 0u;
    uint32_t p = 0u;
    bool first = true;
    auto index = trail_.size();
    do
    {
      if ( clauses_[confl].learnt )
      {
        bump_clause( confl );
      }
      auto const& c = clauses_[confl].lits;
      for ( std::size_t k = first ? 0u : 1u; k < c.size(); ++k )
      {
        auto const v = c[k] >> 1;
        if ( !seen_[v] && level_[v] > 0u )
        {
          seen_[v] = 1u;
          bump_var( v );
          if ( level_[v] >= decision_level() )
          {
            ++path;
          }
          else
          {
            learnt.push_back( c[k] );
          }
        }
      }
      first = false;
      while ( !seen_[trail_[--index] >> 1] )
      {
      }
      p = trail_[index];
      confl = reason_[p >> 1];
      seen_[p >> 1] = 0u;
      --path;
    } while ( path > 0u );
    learnt[0] = p ^ 1u;

    auto const full = learnt;
    std::size_t kept = 1u;
    for ( std::size_t k = 1; k < learnt.size(); ++k )
    {
      if ( !redundant( learnt[k] ) )
      {
        learnt[kept++] = learnt[k];
      }
    }
    learnt.resize( kept );
    for ( std::size_t k = 1; k < full.size(); ++k )
    {
      seen_[full[k] >> 1] = 0u;
    }

    back_level = 0u;
    std::size_t max_i = 1u;
    for ( std::size_t k = 1; k < learnt.size(); ++k )
    {
      if ( level_[learnt[k] >> 1] > back_level )
      {
        back_level = level_[learnt[k] >> 1];
        max_i = k;
      }
    }
    if ( learnt.size() > 1u )
    {
      std::swap( learnt[1], learnt[max_i] );
    }
    return learnt;
  }

  void cancel_until( uint32_t level )
  {
    if ( decision_level() <= level )
    {
      return;
    }
    for ( auto k = trail_.size(); k > trail_lim_[level]; --k )
    {
      auto const v = trail_[k - 1u] >> 1;
      phase_[v] = assign_[v] > 0 ? 1u : 0u;
      assign_[v] = 0;
      reason_[v] = no_reason;
      if ( heap_pos_[v] == not_in_heap )
      {
        heap_insert( v );
      }
    }
    trail_.resize( trail_lim_[level] );
    trail_lim_.resize( level );
    qhead_ = trail_.size();
  }

  uint32_t next_decision()
  {
    while ( !heap_.empty() )
    {
      auto const v = heap_pop();
      if ( assign_[v] == 0 )
      {
        return v;
      }
    }
    return 0u;
  }

  /* learned clauses: drop the less active half, keeping reasons and binaries */
  void reduce_learnts()
  {
    std::vector<uint32_t> order( learnts_ );
    std::stable_sort( order.begin(), order.end(), [&]( auto a, auto b ) { return clauses_[a].activity < clauses_[b].activity; } );
    auto const limit = order.size() / 2u;
    std::size_t removed = 0u;
    for ( auto cref : order )
    {
      if ( removed >= limit )
      {
        break;
      }
      auto& cl = clauses_[cref];
      auto const v = cl.lits[0] >> 1;
      bool const locked = assign_[v] != 0 && reason_[v] == cref;
      if ( cl.lits.size() > 2u && !locked )
      {
        cl.deleted = true;
        cl.lits.clear();
        cl.lits.shrink_to_fit();
        ++removed;
      }
    }
    learnts_.erase( std::remove_if( learnts_.begin(), learnts_.end(), [&]( auto c ) { return clauses_[c].deleted; } ), learnts_.end() );
  }

  void bump_var( uint32_t v )
  {
    if ( ( activity_[v] += var_inc_ ) > 1e100 )
    {
      for ( auto& a : activity_ )
      {
        a *= 1e-100;
      }
      var_inc_ *= 1e-100;
    }
    if ( heap_pos_[v] != not_in_heap )
    {
      heap_up( heap_pos_[v] );
    }
  }

  void bump_clause( uint32_t cref )
  {
    if ( ( clauses_[cref].activity += clause_inc_ ) > 1e20 )
    {
      for ( auto c : learnts_ )
      {
        clauses_[c].activity *= 1e-20;
      }
      clause_inc_ *= 1e-20;
    }
  }

  /* max-heap on activity, ties broken towards the smaller variable */
  bool before( uint32_t a, uint32_t b ) const { return activity_[a] > activity_[b] || ( activity_[a] == activity_[b] && a < b ); }

  void heap_insert( uint32_t v )
  {
    heap_pos_[v] = static_cast<uint32_t>( heap_.size() );
    heap_.push_back( v );
    heap_up( heap_pos_[v] );
  }

  uint32_t heap_pop()
  {
    auto const top = heap_.front();
    heap_pos_[top] = not_in_heap;
    heap_.front() = heap_.back();
    heap_.pop_back();
    if ( !heap_.empty() )
    {
      heap_pos_[heap_.front()] = 0u;
      heap_down( 0u );
    }
    return top;
  }

  void heap_up( uint32_t i )
  {
    auto const v = heap_[i];
    while ( i > 0u && before( v, heap_[( i - 1u ) / 2u] ) )
    {
      heap_[i] = heap_[( i - 1u ) / 2u];
      heap_pos_[heap_[i]] = i;
      i = ( i - 1u ) / 2u;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  void heap_down( uint32_t i )
  {
    auto const v = heap_[i];
    auto const n = static_cast<uint32_t>( heap_.size() );
    while ( 2u * i + 1u < n )
    {
      auto child = 2u * i + 1u;
      if ( child + 1u < n && before( heap_[child + 1u], heap_[child] ) )
      {
        ++child;
      }
      if ( !before( heap_[child], v ) )
      {
        break;
      }
      heap_[i] = heap_[child];
      heap_pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  uint32_t num_vars_;
  std::vector<int8_t> assign_;
  std::vector<uint32_t> level_;
  std::vector<uint32_t> reason_;
  std::vector<uint8_t> seen_;
  std::vector<clause> clauses_;
  std::vector<uint32_t> learnts_;
  std::vector<std::vector<uint32_t>> watches_;
  std::vector<uint32_t> trail_;
  std::vector<uint32_t> trail_lim_;
  std::size_t qhead_{ 0u };
  std::vector<double> activity_;
  std::vector<uint8_t> phase_;
  std::vector<uint32_t> heap_;
  std::vector<uint32_t> heap_pos_;
  double var_inc_{ 1.0 };
  double clause_inc_{ 1.0 };
  std::size_t max_learnts_{ 0u };
  std::size_t num_original_{ 0u };
  bool inconsistent_{ false };
  sat_stats stats_;
};

} // namespace sfqlec
