#ifndef QEL_ERROR_HPP
#define QEL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qel {

/// Failure kinds surfaced by validation and construction routines.
enum class Errc {
  not_hermitian,
  not_closed,
  no_unit,
  bad_blocks,
  algebra_mismatch,
  not_coassociative,
  not_homomorphism,
  not_unital,
  not_injective,
  not_coaction,
  not_a_group,
  missing_block_data,
  no_haar,
  non_unique_haar,
  not_positive,
  not_a_state,
  not_invariant,
  not_invariant_measure,
  inconsistent_verdict,
  parse_error,
  io_error,
  internal,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::not_closed: return "NotClosed";
    case Errc::no_unit: return "NoUnit";
    case Errc::bad_blocks: return "BadBlocks";
    case Errc::algebra_mismatch: return "AlgebraMismatch";
    case Errc::not_coassociative: return "NotCoassociative";
    case Errc::not_homomorphism: return "NotHomomorphism";
    case Errc::not_unital: return "NotUnital";
    case Errc::not_injective: return "NotInjective";
    case Errc::not_coaction: return "NotCoaction";
    case Errc::not_a_group: return "NotAGroup";
    case Errc::missing_block_data: return "MissingBlockData";
    case Errc::no_haar: return "NoHaar";
    case Errc::non_unique_haar: return "NonUniqueHaar";
    case Errc::not_positive: return "NotPositive";
    case Errc::not_a_state: return "NotAState";
    case Errc::not_invariant: return "NotInvariant";
    case Errc::not_invariant_measure: return "NotInvariantMeasure";
    case Errc::inconsistent_verdict: return "InconsistentVerdict";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qel

#endif
