#pragma once

#include <stdexcept>
#include <string>

namespace nehari {

/// Failure categories surfaced across the library and mapped 1:1 onto the
/// C API status codes.
enum class errc {
  invalid_argument = 1,
  parse,
  hypothesis,
  ill_conditioned,
  overflow,
  no_projection,
  lambda_too_large,
  bracket_overflow,
  degenerate_direction,
  degenerate_certificate,
  branch_infeasible,
  unconverged,
  io,
  internal,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::parse: return "parse";
    case errc::hypothesis: return "hypothesis";
    case errc::ill_conditioned: return "ill_conditioned";
    case errc::overflow: return "overflow";
    case errc::no_projection: return "no_projection";
    case errc::lambda_too_large: return "lambda_too_large";
    case errc::bracket_overflow: return "bracket_overflow";
    case errc::degenerate_direction: return "degenerate_direction";
    case errc::degenerate_certificate: return "degenerate_certificate";
    case errc::branch_infeasible: return "branch_infeasible";
    case errc::unconverged: return "unconverged";
    case errc::io: return "io";
    case errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace nehari
