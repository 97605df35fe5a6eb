#pragma once

#include <stdexcept>
#include <string>

#include "qforge/circuit.hpp"

namespace qforge {

class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, int line, int column, std::string token);

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& token() const { return token_; }

private:
  std::string message_;
  int line_;
  int column_;
  std::string token_;
};

/// Parse an OpenQASM 2.0 subset. Supported statements: the version
/// header, qreg/creg, gate applications from GateKind, `measure a -> b;`,
/// `barrier ...;`, and the cut directive `// cirquo:breakbarrier` on its
/// own line. Every op carries a file/line/column SourceSpan.
Circuit parse_qasm(const std::string& text, const std::string& origin = "<input>");

/// Emit the same subset. BreakBarrier becomes the directive comment.
/// parse(serialize(c)) reproduces the op list (spans aside).
std::string serialize_qasm(const Circuit& circuit);

}  // namespace qforge
