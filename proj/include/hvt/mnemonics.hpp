#pragma once

// Builtin names for states and unitaries, used wherever the CLI accepts a
// matrix file.
//
// States:    plus, minus, maxmixedN, phi:ANGLE, bell, ket:BITS, basis:N:K,
//            random:N:SEED[:RANK], sc-rho:DELTA, sc-rho-tilde:DELTA
// Unitaries: rot:ANGLE, id:N, hadamard, swap, haar:N:SEED,
//            strong-continuity-3x3
//
// A comma joins factors into a tensor product, first factor most
// significant: "rot:pi/8,id:2". ANGLE is a decimal or a rational multiple
// of pi such as pi/8, -3pi/8 or 5*pi/8.

#include <optional>
#include <string>
#include <string_view>

#include "hvt/qcore.hpp"

namespace hvt {

/// Rational multiples of pi are formed as sign * (num * pi) / den.
double parse_angle(std::string_view text);

/// nullopt when `name` is not a state mnemonic.
std::optional<DensityMatrix> state_mnemonic(std::string_view name);
std::optional<Unitary> unitary_mnemonic(std::string_view name);

/// Mnemonic if it parses as one, otherwise a matrix file path.
DensityMatrix load_state_spec(const std::string& spec);
Unitary load_unitary_spec(const std::string& spec);

}  // namespace hvt
