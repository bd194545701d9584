#pragma once

#include <stdexcept>
#include <string>

namespace primpts {

enum class Errc {
  ReducedPolynomial,
  SignatureMismatch,
  DiscriminantMismatch,
  UnitLatticeMismatch,
  PrecisionUnreachable,
  PrecisionStall,
  ZeroVector,
  NotASubfield,
  UnsupportedSpec,
  NotANorm,
  DimensionTooLarge,
  EnumerationBudgetExceeded,
  WitnessNotInLattice,
  NotLatticeMember,
  BadParams,
  DomainMismatch,
  BadQ,
  UndecidableMembership,
  BudgetExceeded,
  UnitRankMismatch,
  BadIndex,
  ChartsUnavailable,
  QuotientTooLarge,
  NonIntegralExponent,
  NothingFound,
  ZetaUnavailable,
  GridTooSmall,
  TruncationInsufficient,
  ConfigInvalid,
  AssertionFailed,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

}  // namespace primpts
