#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "leakbound/rational.hpp"

namespace leakbound {

/// Ordered list of distinct symbol labels.
using Alphabet = std::vector<std::string>;

/// Alphabet {"0", "1", ..., "size-1"}.
Alphabet numbered_alphabet(std::size_t size);

/// Exact probability mass function over an ordered alphabet. Masses are
/// indexed by alphabet position.
class Pmf {
 public:
  /// Throws ValidationError unless masses are in [0, 1], sum to exactly 1,
  /// and match the (duplicate-free, non-empty) alphabet in length.
  Pmf(Alphabet alphabet, std::vector<Rational> masses);

  /// Point mass on alphabet position `index`.
  static Pmf point(Alphabet alphabet, std::size_t index);

  static Pmf uniform(Alphabet alphabet);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const Rational> masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return masses_.size(); }
  const Rational& operator[](std::size_t index) const { return masses_[index]; }

  /// Mass of a symbol by label; throws ValidationError for unknown labels.
  const Rational& mass(const std::string& symbol) const;

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Rational> masses_;
};

/// Row-stochastic conditional distribution P_{Y|X}: one output PMF per input
/// symbol, all rows over a shared output alphabet.
class DiscreteChannel {
 public:
  /// Throws ValidationError if there are no rows, the row count differs from
  /// the input alphabet size, or any row is not a PMF over `output_alphabet`.
  DiscreteChannel(Alphabet input_alphabet, Alphabet output_alphabet,
                  std::vector<std::vector<Rational>> rows);

  /// Stacks a family of PMFs over one alphabet; inputs are numbered 0..n-1.
  static DiscreteChannel from_family(std::span<const Pmf> family);

  const Alphabet& input_alphabet() const noexcept { return input_alphabet_; }
  const Alphabet& output_alphabet() const noexcept { return output_alphabet_; }
  std::size_t input_size() const noexcept { return rows_.size(); }
  std::size_t output_size() const noexcept { return output_alphabet_.size(); }

  std::span<const Rational> row(std::size_t input) const { return rows_[input]; }
  const Rational& at(std::size_t input, std::size_t output) const {
    return rows_[input][output];
  }
  Pmf row_pmf(std::size_t input) const;
  std::vector<Pmf> rows_as_pmfs() const;

  /// Column values P(y | x) for every x, in input order.
  std::vector<Rational> column(std::size_t output) const;

  friend bool operator==(const DiscreteChannel&, const DiscreteChannel&) = default;

 private:
  Alphabet input_alphabet_;
  Alphabet output_alphabet_;
  std::vector<std::vector<Rational>> rows_;
};

}  // namespace leakbound
