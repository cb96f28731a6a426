#pragma once

#include <string>

#include "structfile.hpp"

namespace posskit {

// Status values double as CLI exit codes and C API return codes.
inline constexpr int kStatusOk = 0;        // pass / true / valid
inline constexpr int kStatusFail = 1;      // violation / false / countermodel
inline constexpr int kStatusInput = 2;     // unreadable or ill-formed input
inline constexpr int kStatusCap = 3;       // enumeration guard exceeded

struct CmdResult {
  int status = kStatusOk;
  std::string text;
  std::string json;
};

/// Runs every validator applicable to the structure's kind and tabulates
/// condition, verdict, witness. Invariant violations report FAIL and flip the
/// status; unmet optional conditions report "no" and do not.
CmdResult cmd_check(const Structure& s, const Caps& caps = default_caps());

/// Forces a formula at a point. Variables without a `val` line default to the
/// empty proposition. Verbose output lists the forced set of every
/// subformula.
CmdResult cmd_eval(const Structure& s, const std::string& point, const std::string& formula,
                   bool verbose, const Caps& caps = default_caps());

/// Exhaustive validity search; reports the first countermodel in the
/// deterministic order, or "valid". A designated set switches to
/// somewhere-forced validity.
CmdResult cmd_valid(const Structure& s, const std::string& formula,
                    const Caps& caps = default_caps());

/// Completion constructions, emitted in the structure file format:
/// "macneille" and "canonical" of an algebra, "ro" of a poset or frame,
/// "dragalin" of a lattice.
CmdResult cmd_complete(const Structure& s, const std::string& what,
                       const Caps& caps = default_caps());

/// Crosses the duality: frames dump their algebras, algebras dump their
/// general filter frames.
CmdResult cmd_dualize(const Structure& s, const Caps& caps = default_caps());

}  // namespace posskit
