/*!
  \file gate_kind.hpp
  \brief Gate library of clocked (SFQ-style) netlists
*/

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace sfqlec
{

/*! \brief Kinds of gates understood by the toolkit.
 *
 * Every kind drives exactly one output net. `dff` and `buf` compute identity
 * on their single input; `split` is identity as well but is the only kind
 * whose output may be read by more than one gate in fanout-restricted
 * technologies.
 */
enum class gate_kind : uint8_t
{
  and2,
  or2,
  xor2,
  nand2,
  nor2,
  xnor2,
  inv,
  buf,
  dff,
  split
};

inline constexpr std::size_t num_gate_kinds = 10u;

inline constexpr std::array<gate_kind, num_gate_kinds> all_gate_kinds = {
    gate_kind::and2, gate_kind::or2, gate_kind::xor2, gate_kind::nand2, gate_kind::nor2,
    gate_kind::xnor2, gate_kind::inv, gate_kind::buf, gate_kind::dff, gate_kind::split };

inline constexpr std::string_view to_string( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::and2: return "AND2";
  case gate_kind::or2: return "OR2";
  case gate_kind::xor2: return "XOR2";
  case gate_kind::nand2: return "NAND2";
  case gate_kind::nor2: return "NOR2";
  case gate_kind::xnor2: return "XNOR2";
  case gate_kind::inv: return "INV";
  case gate_kind::buf: return "BUF";
  case gate_kind::dff: return "DFF";
  case gate_kind::split: return "SPLIT";
  }
  return "?";
}

/*! \brief Case-insensitive lookup of a kind name. */
inline std::optional<gate_kind> gate_kind_from_string( std::string_view name )
{
  std::string upper( name );
  std::transform( upper.begin(), upper.end(), upper.begin(), []( unsigned char c ) { return static_cast<char>( std::toupper( c ) ); } );
  for ( auto kind : all_gate_kinds )
  {
    if ( to_string( kind ) == upper )
    {
      return kind;
    }
  }
  return std::nullopt;
}

inline constexpr uint32_t arity( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::inv:
  case gate_kind::buf:
  case gate_kind::dff:
  case gate_kind::split:
    return 1u;
  default:
    return 2u;
  }
}

/*! \brief True for the kinds that carry logic (everything but BUF, DFF and SPLIT). */
inline constexpr bool is_logic( gate_kind kind )
{
  return kind != gate_kind::buf && kind != gate_kind::dff && kind != gate_kind::split;
}

inline constexpr bool evaluate( gate_kind kind, bool a, bool b = false )
{
  switch ( kind )
  {
  case gate_kind::and2: return a && b;
  case gate_kind::or2: return a || b;
  case gate_kind::xor2: return a != b;
  case gate_kind::nand2: return !( a && b );
  case gate_kind::nor2: return !( a || b );
  case gate_kind::xnor2: return a == b;
  case gate_kind::inv: return !a;
  case gate_kind::buf:
  case gate_kind::dff:
  case gate_kind::split:
    return a;
  }
  return false;
}

inline bool evaluate( gate_kind kind, std::span<const bool> inputs )
{
  return arity( kind ) == 1u ? evaluate( kind, inputs[0] ) : evaluate( kind, inputs[0], inputs[1] );
}

/*! \brief Small set of gate kinds. */
class kind_set
{
public:
  constexpr kind_set() = default;
  constexpr kind_set( std::initializer_list<gate_kind> kinds )
  {
    for ( auto k : kinds )
    {
      insert( k );
    }
  }

  constexpr void insert( gate_kind kind ) { bits_ |= mask( kind ); }
  constexpr void erase( gate_kind kind ) { bits_ &= ~mask( kind ); }
  constexpr bool contains( gate_kind kind ) const { return ( bits_ & mask( kind ) ) != 0u; }
  constexpr bool empty() const { return bits_ == 0u; }
  constexpr bool operator==( kind_set const& ) const = default;

private:
  static constexpr uint32_t mask( gate_kind kind ) { return 1u << static_cast<uint32_t>( kind ); }
  uint32_t bits_{ 0u };
};

/*! \brief Intrinsic clocking: in RSFQ only the splitter is asynchronous. */
inline constexpr kind_set default_non_clocked_kinds{ gate_kind::split };

} // namespace sfqlec
