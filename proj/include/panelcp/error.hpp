#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace panelcp {

enum class Errc {
  RaggedPanel,
  NonFinite,
  EmptyPanel,
  IndexOutOfRange,
  MisalignedSeries,
  ZeroGames,
  DegenerateSeason,
  InsufficientData,
  DegenerateSeries,
  UnsortedInput,
  BadM,
  ConfigError,
  FingerprintMismatch,
  ScaleTooCoarse,
  RankDeficient,
  InstanceTooLarge,
  ParseError,
  UnknownFranchise,
  MissingYears,
  MissingFranchiseYear,
  FranchiseTooShort,
  MalformedResult,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

/// Library-wide exception. Every failure carries one of the Errc classes so
/// callers (the CLI in particular) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace panelcp
