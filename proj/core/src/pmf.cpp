#include "leakbound/pmf.hpp"

#include <algorithm>
#include <set>

#include "leakbound/error.hpp"

namespace leakbound {
namespace {

void check_alphabet(const Alphabet& alphabet, const char* what) {
  if (alphabet.empty()) throw ValidationError(std::string(what) + " alphabet is empty");
  std::set<std::string> seen;
  for (const auto& symbol : alphabet) {
    if (!seen.insert(symbol).second) {
      throw ValidationError(std::string(what) + " alphabet repeats symbol '" + symbol + "'");
    }
  }
}

void check_masses(std::span<const Rational> masses, std::size_t expected_size) {
  if (masses.size() != expected_size) {
    throw ValidationError("PMF has " + std::to_string(masses.size()) + " masses for an alphabet of " +
                          std::to_string(expected_size));
  }
  Rational total = 0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] < 0 || masses[i] > 1) {
      throw ValidationError("mass " + to_string(masses[i]) + " at position " + std::to_string(i) +
                            " is outside [0, 1]");
    }
    total += masses[i];
  }
  if (total != 1) throw ValidationError("masses sum to " + to_string(total) + ", not 1");
}

}  // namespace

Alphabet numbered_alphabet(std::size_t size) {
  Alphabet alphabet;
  alphabet.reserve(size);
  for (std::size_t i = 0; i < size; ++i) alphabet.push_back(std::to_string(i));
  return alphabet;
}

Pmf::Pmf(Alphabet alphabet, std::vector<Rational> masses)
    : alphabet_(std::move(alphabet)), masses_(std::move(masses)) {
  check_alphabet(alphabet_, "PMF");
  check_masses(masses_, alphabet_.size());
}

Pmf Pmf::point(Alphabet alphabet, std::size_t index) {
  std::vector<Rational> masses(alphabet.size(), Rational(0));
  if (index >= masses.size()) throw ValidationError("point mass index out of range");
  masses[index] = 1;
  return Pmf(std::move(alphabet), std::move(masses));
}

Pmf Pmf::uniform(Alphabet alphabet) {
  const auto n = alphabet.size();
  if (n == 0) throw ValidationError("PMF alphabet is empty");
  std::vector<Rational> masses(n, Rational(1, static_cast<long>(n)));
  return Pmf(std::move(alphabet), std::move(masses));
}

const Rational& Pmf::mass(const std::string& symbol) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), symbol);
  if (it == alphabet_.end()) throw ValidationError("unknown symbol '" + symbol + "'");
  return masses_[static_cast<std::size_t>(it - alphabet_.begin())];
}

DiscreteChannel::DiscreteChannel(Alphabet input_alphabet, Alphabet output_alphabet,
                                 std::vector<std::vector<Rational>> rows)
    : input_alphabet_(std::move(input_alphabet)),
      output_alphabet_(std::move(output_alphabet)),
      rows_(std::move(rows)) {
  check_alphabet(input_alphabet_, "channel input");
  check_alphabet(output_alphabet_, "channel output");
  if (rows_.size() != input_alphabet_.size()) {
    throw ValidationError("channel has " + std::to_string(rows_.size()) + " rows for " +
                          std::to_string(input_alphabet_.size()) + " inputs");
  }
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    try {
      check_masses(rows_[x], output_alphabet_.size());
    } catch (const ValidationError& e) {
      throw ValidationError("channel row " + std::to_string(x) + ": " + e.what());
    }
  }
}

DiscreteChannel DiscreteChannel::from_family(std::span<const Pmf> family) {
  if (family.empty()) throw ValidationError("empty PMF family");
  std::vector<std::vector<Rational>> rows;
  rows.reserve(family.size());
  for (const auto& pmf : family) {
    if (pmf.alphabet() != family.front().alphabet()) {
      throw ValidationError("PMF family does not share one alphabet");
    }
    rows.emplace_back(pmf.masses().begin(), pmf.masses().end());
  }
  return DiscreteChannel(numbered_alphabet(family.size()), family.front().alphabet(),
                         std::move(rows));
}

Pmf DiscreteChannel::row_pmf(std::size_t input) const {
  return Pmf(output_alphabet_, rows_.at(input));
}

std::vector<Pmf> DiscreteChannel::rows_as_pmfs() const {
  std::vector<Pmf> out;
  out.reserve(rows_.size());
  for (std::size_t x = 0; x < rows_.size(); ++x) out.push_back(row_pmf(x));
  return out;
}

std::vector<Rational> DiscreteChannel::column(std::size_t output) const {
  std::vector<Rational> col;
  col.reserve(rows_.size());
  for (const auto& row : rows_) col.push_back(row[output]);
  return col;
}

}  // namespace leakbound
