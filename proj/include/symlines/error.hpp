#pragma once

#include <stdexcept>
#include <string>

namespace symlines {

enum class Errc {
  invalid_argument,
  invalid_order,
  degenerate_exponent,
  degenerate_geometry,
  degenerate_pair,
  estimation_failed,
  inconsistent_separation,
  voting_failed,
  convergence,
  io,
  config,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Stage-tagged failure raised by the pipeline orchestrator.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace symlines
