#pragma once

// JSON, CSV and binary encodings of the library's value types.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "decayalg/blocking_kernel.hpp"
#include "decayalg/cd_operator.hpp"
#include "decayalg/dense.hpp"
#include "decayalg/seq_algebra.hpp"
#include "decayalg/weights.hpp"

namespace decayalg {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

json to_json(const LatticeIndex& n);
LatticeIndex lattice_index_from_json(const json& j);

// {"a":..,"b":..,"s":..,"t":..,"index_norm":"l1"|"l2"|"linf"}
json to_json(const Weight& w);
Weight weight_from_json(const json& j);

// {"c":..,"radius":R,"entries":[{"index":[..],"re":..,"im":..},..]}; zero
// coefficients are omitted.
json to_json(const FiniteSeq& a);
FiniteSeq finite_seq_from_json(const json& j);

// {"d":..,"re":[[..]],"im":[[..]]}
json to_json(const DenseBlock& b);
DenseBlock dense_block_from_json(const json& j);

// "DBLK", u32 d, then d*d (re, im) pairs of little-endian f64, row-major.
void write_dense_block_binary(std::ostream& os, const DenseBlock& b);
DenseBlock read_dense_block_binary(std::istream& is);

// {"c":..,"N":..,"W":..,"d":..,"boundary":..,"blocks":[{"k":[..],"m":[..],"block":{..}},..]}
json to_json(const CDOperator& t);
CDOperator cd_operator_from_json(const json& j);

/// Columns m_1..m_c,beta,weight,weighted_beta,cumsum.
void write_envelope_csv(std::ostream& os, const std::vector<EnvelopeRow>& rows, int c);
std::vector<EnvelopeRow> read_envelope_csv(std::istream& is, int c);

/// Columns theta_1..theta_c,re,im.
void write_symbol_csv(std::ostream& os, const SymbolGrid& grid);

// One JSON header line {"format_version":1,"c":..,"N":..,"q":..,"encoding":"f64le"}
// followed by (re, im) little-endian f64 pairs in (cell, raster) order.
void write_grid_function(std::ostream& os, const GridFunction& x);
GridFunction read_grid_function(std::istream& is);

/// One kernel block (k, m) as CSV: t_1..t_c,s_1..s_c,re,im over its samples.
void write_kernel_block_csv(std::ostream& os, const Kernel& kern, const LatticeIndex& k, const LatticeIndex& m);

}  // namespace decayalg
