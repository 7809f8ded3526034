#include "hvt/mnemonics.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "hvt/axioms.hpp"
#include "hvt/matrix_io.hpp"

namespace hvt {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k)
    if (k == s.size() || s[k] == sep) {
      out.push_back(s.substr(start, k - start));
      start = k + 1;
    }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long long> to_integer(std::string_view s) {
  if (s.empty()) return std::nullopt;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Index dimension_arg(std::string_view s, const std::string& name) {
  const auto v = to_integer(s);
  if (!v || *v < 1 || *v > 64) throw ValidationError("mnemonic '" + name + "': bad dimension '" + std::string(s) + "'");
  return static_cast<Index>(*v);
}

std::optional<DensityMatrix> single_state(std::string_view name) {
  const std::string full(name);
  const auto parts = split(name, ':');
  const std::string_view head = parts[0];
  const double h = 1.0 / std::sqrt(2.0);
  if (parts.size() == 1) {
    if (head == "plus" || head == "minus") {
      ComplexVector v(2);
      v << h, head == "plus" ? h : -h;
      return pure_state(v);
    }
    if (head == "bell") {
      ComplexVector v = ComplexVector::Zero(4);
      v(0) = v(3) = h;
      return pure_state(v);
    }
    if (head.starts_with("maxmixed")) {
      const std::string_view rest = head.substr(8);
      return maximally_mixed(rest.empty() ? 2 : dimension_arg(rest, full));
    }
    return std::nullopt;
  }
  if (head == "phi" && parts.size() == 2) return pure_state(phi_state(parse_angle(parts[1])));
  if (head == "ket" && parts.size() == 2) {
    const std::string_view bits = parts[1];
    if (bits.empty() || bits.size() > 6 || bits.find_first_not_of("01") != std::string_view::npos)
      throw ValidationError("mnemonic '" + full + "': expected a string of 0/1 digits");
    Index k = 0;
    for (char c : bits) k = 2 * k + (c == '1');
    return pure_state(basis_state(Index{1} << bits.size(), k));
  }
  if (head == "basis" && parts.size() == 3) {
    const Index n = dimension_arg(parts[1], full);
    const auto k = to_integer(parts[2]);
    if (!k || *k < 0 || *k >= n) throw ValidationError("mnemonic '" + full + "': basis index out of range");
    return pure_state(basis_state(n, static_cast<Index>(*k)));
  }
  if (head == "random" && (parts.size() == 3 || parts.size() == 4)) {
    const Index n = dimension_arg(parts[1], full);
    const auto seed = to_integer(parts[2]);
    if (!seed || *seed < 0) throw ValidationError("mnemonic '" + full + "': bad seed");
    Index rank = n;
    if (parts.size() == 4) rank = dimension_arg(parts[3], full);
    return random_density(n, static_cast<std::uint64_t>(*seed), rank);
  }
  if ((head == "sc-rho" || head == "sc-rho-tilde") && parts.size() == 2) {
    const auto d = to_double(parts[1]);
    if (!d || *d < 0.0 || 2.0 * *d * *d > 1.0) throw ValidationError("mnemonic '" + full + "': bad delta");
    return pure_state(strong_continuity_state(*d, head == "sc-rho" ? 1.0 : -1.0));
  }
  return std::nullopt;
}

std::optional<Unitary> single_unitary(std::string_view name) {
  const std::string full(name);
  const auto parts = split(name, ':');
  const std::string_view head = parts[0];
  if (parts.size() == 1) {
    if (head == "strong-continuity-3x3") return strong_continuity_unitary();
    if (head == "hadamard") {
      ComplexMatrix m(2, 2);
      m << 1, 1, 1, -1;
      return Unitary::unchecked(m / std::sqrt(2.0));
    }
    if (head == "swap") {
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
      return Unitary::unchecked(m);
    }
    return std::nullopt;
  }
  if (head == "rot" && parts.size() == 2) return rotation(parse_angle(parts[1]));
  if (head == "id" && parts.size() == 2) return Unitary::identity(dimension_arg(parts[1], full));
  if (head == "haar" && parts.size() == 3) {
    const Index n = dimension_arg(parts[1], full);
    const auto seed = to_integer(parts[2]);
    if (!seed || *seed < 0) throw ValidationError("mnemonic '" + full + "': bad seed");
    return random_unitary(n, static_cast<std::uint64_t>(*seed));
  }
  return std::nullopt;
}

}  // namespace

double parse_angle(std::string_view text) {
  const std::string full(text);
  std::string_view s = text;
  if (auto v = to_double(s)) return *v;
  double sign = 1.0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    if (s[0] == '-') sign = -1.0;
    s.remove_prefix(1);
  }
  const std::size_t pi = s.find("pi");
  if (pi == std::string_view::npos) throw ValidationError("angle '" + full + "': expected a number or a multiple of pi");
  std::string_view num = s.substr(0, pi);
  if (!num.empty() && num.back() == '*') num.remove_suffix(1);
  std::string_view rest = s.substr(pi + 2);
  long long numerator = 1, denominator = 1;
  if (!num.empty()) {
    const auto n = to_integer(num);
    if (!n) throw ValidationError("angle '" + full + "': bad multiplier '" + std::string(num) + "'");
    numerator = *n;
  }
  if (!rest.empty()) {
    if (rest[0] != '/') throw ValidationError("angle '" + full + "': expected '/' after pi");
    const auto d = to_integer(rest.substr(1));
    if (!d || *d == 0) throw ValidationError("angle '" + full + "': bad denominator");
    denominator = *d;
  }
  return sign * (static_cast<double>(numerator) * std::numbers::pi) / static_cast<double>(denominator);
}

std::optional<DensityMatrix> state_mnemonic(std::string_view name) {
  std::optional<DensityMatrix> out;
  for (std::string_view factor : split(name, ',')) {
    auto f = single_state(factor);
    if (!f) return std::nullopt;
    out = out ? kron(*out, *f) : *f;
  }
  return out;
}

std::optional<Unitary> unitary_mnemonic(std::string_view name) {
  std::optional<Unitary> out;
  for (std::string_view factor : split(name, ',')) {
    auto f = single_unitary(factor);
    if (!f) return std::nullopt;
    out = out ? kron(*out, *f) : *f;
  }
  return out;
}

DensityMatrix load_state_spec(const std::string& spec) {
  if (auto m = state_mnemonic(spec)) return *m;
  return load_density(spec);
}

Unitary load_unitary_spec(const std::string& spec) {
  if (auto m = unitary_mnemonic(spec)) return *m;
  return load_unitary(spec);
}

}  // namespace hvt
