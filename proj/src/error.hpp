#pragma once

#include <stdexcept>
#include <string>

namespace posskit {

// Library-wide failure modes. `input` covers malformed or inconsistent data,
// `cap` covers exhaustive enumerations that would exceed their guard.
class Error : public std::runtime_error {
 public:
  enum class Kind { input, cap };

  Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

  static Error input(const std::string& msg) { return Error(Kind::input, msg); }
  static Error cap(const std::string& msg) { return Error(Kind::cap, msg); }

 private:
  Kind kind_;
};

// Enumeration guards. Exhaustive scans fail loudly past these bounds.
struct Caps {
  int poset_enum = 20;                 // max poset size for regular-open enumeration
  int algebra_elems = 1024;            // max materialized algebra carrier
  int downsets = 4096;                 // max materialized downset lattice
  int iso_search = 8;                  // max carrier for frame isomorphism search
  int valid_vars = 4;                  // max free variables in a validity search
  long long valid_space = 1 << 20;     // max |P|^|vars| valuation space
  long long subset_scan = 1 << 20;     // max subsets visited in lattice law checks
};

inline const Caps& default_caps() {
  static const Caps caps{};
  return caps;
}

// Outcome of a structural check: ok, or the first violation in words.
struct Check {
  bool ok = true;
  std::string violation;
  static Check pass() { return {}; }
  static Check fail(std::string why) { return {false, std::move(why)}; }
};

}  // namespace posskit
