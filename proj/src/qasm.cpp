#include "qforge/qasm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace qforge {

ParseError::ParseError(std::string message, int line, int column, std::string token)
    : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")"),
      message_(std::move(message)),
      line_(line),
      column_(column),
      token_(std::move(token)) {}

namespace {

constexpr std::string_view kBreakDirective = "// cirquo:breakbarrier";

enum class TokKind { Ident, Number, Symbol, Arrow, BreakBarrier, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  double value = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    if (skip_space_and_comments()) return;  // directive token already set
    current_ = Token{};
    current_.line = line_;
    current_.column = col_;
    if (pos_ >= text_.size()) {
      current_.kind = TokKind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ident += text_[pos_];
        bump();
      }
      current_.kind = TokKind::Ident;
      current_.text = std::move(ident);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::string num;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
              text_[pos_] == 'e' || text_[pos_] == 'E' ||
              ((text_[pos_] == '+' || text_[pos_] == '-') && !num.empty() &&
               (num.back() == 'e' || num.back() == 'E')))) {
        num += text_[pos_];
        bump();
      }
      current_.kind = TokKind::Number;
      current_.text = num;
      try {
        current_.value = std::stod(num);
      } catch (const std::exception&) {
        throw ParseError("malformed number", current_.line, current_.column, num);
      }
      return;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      bump();
      bump();
      current_.kind = TokKind::Arrow;
      current_.text = "->";
      return;
    }
    current_.kind = TokKind::Symbol;
    current_.text = std::string(1, c);
    bump();
  }

  // Returns true when a break-barrier directive was turned into the
  // current token.
  bool skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
        continue;
      }
      if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        // Check for the break-barrier directive: exact text on its own line.
        std::size_t line_end = text_.find('\n', pos_);
        if (line_end == std::string::npos) line_end = text_.size();
        std::string_view rest(text_.data() + pos_, line_end - pos_);
        while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) {
          rest.remove_suffix(1);
        }
        if (rest == kBreakDirective && col_at_line_start()) {
          current_ = Token{TokKind::BreakBarrier, std::string(kBreakDirective), 0,
                           line_, col_};
          while (pos_ < line_end) bump();
          return true;
        }
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
        continue;
      }
      break;
    }
    return false;
  }

  // The directive must start the line (possibly after whitespace only).
  bool col_at_line_start() const {
    std::size_t p = pos_;
    while (p > 0 && text_[p - 1] != '\n') {
      char c = text_[p - 1];
      if (c != ' ' && c != '\t' && c != '\r') return false;
      --p;
    }
    return true;
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

class Parser {
public:
  Parser(const std::string& text, std::string origin)
      : lex_(text), origin_(std::move(origin)) {}

  Circuit parse() {
    expect_ident("OPENQASM");
    Token version = expect(TokKind::Number, "version number");
    if (version.text != "2.0")
      throw ParseError("unsupported OPENQASM version", version.line, version.column,
                       version.text);
    expect_symbol(";");

    // Register declarations and statements may interleave; gather ops in
    // a pending list so registers declared up front are the common case.
    std::vector<RegisterDecl> qregs;
    std::vector<RegisterDecl> cregs;
    std::vector<GateOp> pending;

    auto flat_qubit = [&](const std::string& reg, int idx, const Token& at) -> int {
      int base = 0;
      for (const auto& r : qregs) {
        if (r.name == reg) {
          if (idx < 0 || idx >= r.size)
            throw ParseError("qubit index out of range for register " + reg, at.line,
                             at.column, at.text);
          return base + idx;
        }
        base += r.size;
      }
      throw ParseError("undeclared quantum register " + reg, at.line, at.column, reg);
    };
    auto flat_clbit = [&](const std::string& reg, int idx, const Token& at) -> int {
      int base = 0;
      for (const auto& r : cregs) {
        if (r.name == reg) {
          if (idx < 0 || idx >= r.size)
            throw ParseError("clbit index out of range for register " + reg, at.line,
                             at.column, at.text);
          return base + idx;
        }
        base += r.size;
      }
      throw ParseError("undeclared classical register " + reg, at.line, at.column, reg);
    };

    while (lex_.peek().kind != TokKind::End) {
      Token head = lex_.next();
      if (head.kind == TokKind::BreakBarrier) {
        pending.push_back(GateOp{GateKind::BreakBarrier, {}, {}, {},
                                 SourceSpan{origin_, head.line, head.column}});
        continue;
      }
      if (head.kind != TokKind::Ident)
        throw ParseError("expected statement", head.line, head.column, head.text);

      if (head.text == "qreg" || head.text == "creg") {
        Token name = expect(TokKind::Ident, "register name");
        expect_symbol("[");
        Token size = expect(TokKind::Number, "register size");
        expect_symbol("]");
        expect_symbol(";");
        int n = static_cast<int>(size.value);
        if (n < 1 || size.text.find('.') != std::string::npos)
          throw ParseError("register size must be a positive integer", size.line,
                           size.column, size.text);
        auto& regs = head.text == "qreg" ? qregs : cregs;
        for (const auto& r : regs) {
          if (r.name == name.text)
            throw ParseError("duplicate register " + name.text, name.line, name.column,
                             name.text);
        }
        regs.push_back({name.text, n});
        continue;
      }

      if (head.text == "measure") {
        auto [qreg, qidx, qtok] = parse_indexed_arg();
        Token arrow = lex_.next();
        if (arrow.kind != TokKind::Arrow)
          throw ParseError("expected '->' in measure", arrow.line, arrow.column,
                           arrow.text);
        auto [creg, cidx, ctok] = parse_indexed_arg();
        expect_symbol(";");
        pending.push_back(GateOp{GateKind::Measure,
                                 {},
                                 {flat_qubit(qreg, qidx, qtok)},
                                 {flat_clbit(creg, cidx, ctok)},
                                 SourceSpan{origin_, head.line, head.column}});
        continue;
      }

      if (head.text == "barrier") {
        std::vector<int> qubits;
        if (!(lex_.peek().kind == TokKind::Symbol && lex_.peek().text == ";")) {
          while (true) {
            auto [reg, idx, tok] = parse_indexed_arg();
            qubits.push_back(flat_qubit(reg, idx, tok));
            if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == ",") {
              lex_.next();
              continue;
            }
            break;
          }
        }
        expect_symbol(";");
        pending.push_back(GateOp{GateKind::Barrier, {}, std::move(qubits), {},
                                 SourceSpan{origin_, head.line, head.column}});
        continue;
      }

      auto kind = kind_from_name(head.text);
      if (!kind || *kind == GateKind::Measure || *kind == GateKind::Barrier ||
          *kind == GateKind::BreakBarrier) {
        throw ParseError("unknown gate '" + head.text + "'", head.line, head.column,
                         head.text);
      }

      std::vector<double> angles;
      if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == "(") {
        lex_.next();
        angles.push_back(parse_expr());
        while (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == ",") {
          lex_.next();
          angles.push_back(parse_expr());
        }
        expect_symbol(")");
      }
      if (static_cast<int>(angles.size()) != angle_arity(*kind))
        throw ParseError("gate '" + head.text + "' expects " +
                             std::to_string(angle_arity(*kind)) + " angle(s)",
                         head.line, head.column, head.text);

      std::vector<int> qubits;
      while (true) {
        auto [reg, idx, tok] = parse_indexed_arg();
        qubits.push_back(flat_qubit(reg, idx, tok));
        if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == ",") {
          lex_.next();
          continue;
        }
        break;
      }
      expect_symbol(";");
      if (static_cast<int>(qubits.size()) != qubit_arity(*kind))
        throw ParseError("gate '" + head.text + "' expects " +
                             std::to_string(qubit_arity(*kind)) + " qubit(s)",
                         head.line, head.column, head.text);
      for (std::size_t i = 0; i < qubits.size(); ++i) {
        for (std::size_t j = i + 1; j < qubits.size(); ++j) {
          if (qubits[i] == qubits[j])
            throw ParseError("duplicate qubit operand", head.line, head.column,
                             head.text);
        }
      }
      pending.push_back(GateOp{*kind, std::move(angles), std::move(qubits), {},
                               SourceSpan{origin_, head.line, head.column}});
    }

    if (qregs.empty())
      throw ParseError("no quantum register declared", 1, 1, "");
    Circuit circuit(qregs, cregs);
    for (auto& op : pending) {
      try {
        circuit.add(std::move(op));
      } catch (const CircuitError& e) {
        throw ParseError(e.what(), 1, 1, "");
      }
    }
    return circuit;
  }

private:
  std::tuple<std::string, int, Token> parse_indexed_arg() {
    Token name = expect(TokKind::Ident, "register reference");
    expect_symbol("[");
    Token idx = expect(TokKind::Number, "index");
    expect_symbol("]");
    if (idx.text.find('.') != std::string::npos)
      throw ParseError("index must be an integer", idx.line, idx.column, idx.text);
    return {name.text, static_cast<int>(idx.value), name};
  }

  // expr := term (('+'|'-') term)*
  double parse_expr() {
    double v = parse_term();
    while (lex_.peek().kind == TokKind::Symbol &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      std::string op = lex_.next().text;
      double rhs = parse_term();
      v = op == "+" ? v + rhs : v - rhs;
    }
    return v;
  }

  double parse_term() {
    double v = parse_factor();
    while (lex_.peek().kind == TokKind::Symbol &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      std::string op = lex_.next().text;
      double rhs = parse_factor();
      if (op == "/") {
        if (rhs == 0)
          throw ParseError("division by zero in angle expression", lex_.peek().line,
                           lex_.peek().column, "/");
        v /= rhs;
      } else {
        v *= rhs;
      }
    }
    return v;
  }

  double parse_factor() {
    if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == "-") {
      lex_.next();
      return -parse_factor();
    }
    double base = parse_primary();
    if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == "^") {
      Token caret = lex_.next();
      double exponent = parse_factor();
      if (exponent != std::floor(exponent))
        throw ParseError("only integer powers are supported", caret.line, caret.column,
                         "^");
      return std::pow(base, exponent);
    }
    return base;
  }

  double parse_primary() {
    Token t = lex_.next();
    if (t.kind == TokKind::Number) return t.value;
    if (t.kind == TokKind::Ident && t.text == "pi") return std::numbers::pi;
    if (t.kind == TokKind::Symbol && t.text == "(") {
      double v = parse_expr();
      expect_symbol(")");
      return v;
    }
    throw ParseError("expected angle expression", t.line, t.column, t.text);
  }

  Token expect(TokKind kind, const std::string& what) {
    Token t = lex_.next();
    if (t.kind != kind)
      throw ParseError("expected " + what, t.line, t.column, t.text);
    return t;
  }

  void expect_ident(const std::string& word) {
    Token t = lex_.next();
    if (t.kind != TokKind::Ident || t.text != word)
      throw ParseError("expected '" + word + "'", t.line, t.column, t.text);
  }

  void expect_symbol(const std::string& sym) {
    Token t = lex_.next();
    if (t.kind != TokKind::Symbol || t.text != sym)
      throw ParseError("expected '" + sym + "'", t.line, t.column, t.text);
  }

  Lexer lex_;
  std::string origin_;
};

std::string format_angle(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Circuit parse_qasm(const std::string& text, const std::string& origin) {
  return Parser(text, origin).parse();
}

std::string serialize_qasm(const Circuit& circuit) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  for (const auto& r : circuit.qregs())
    out << "qreg " << r.name << "[" << r.size << "];\n";
  for (const auto& r : circuit.cregs())
    out << "creg " << r.name << "[" << r.size << "];\n";

  auto qarg = [&](int flat) {
    QubitRef ref = circuit.qubit(flat);
    return ref.reg + "[" + std::to_string(ref.index) + "]";
  };
  auto carg = [&](int flat) {
    int base = 0;
    for (const auto& r : circuit.cregs()) {
      if (flat < base + r.size)
        return r.name + "[" + std::to_string(flat - base) + "]";
      base += r.size;
    }
    throw CircuitError("clbit index out of range");
  };

  for (const auto& op : circuit.ops()) {
    switch (op.kind) {
      case GateKind::BreakBarrier:
        out << kBreakDirective << "\n";
        break;
      case GateKind::Barrier: {
        out << "barrier";
        for (std::size_t i = 0; i < op.qubits.size(); ++i)
          out << (i == 0 ? " " : ",") << qarg(op.qubits[i]);
        out << ";\n";
        break;
      }
      case GateKind::Measure:
        out << "measure " << qarg(op.qubits[0]) << " -> " << carg(op.clbits[0])
            << ";\n";
        break;
      default: {
        out << kind_name(op.kind);
        if (!op.angles.empty()) {
          out << "(";
          for (std::size_t i = 0; i < op.angles.size(); ++i) {
            if (i) out << ",";
            out << format_angle(op.angles[i]);
          }
          out << ")";
        }
        for (std::size_t i = 0; i < op.qubits.size(); ++i)
          out << (i == 0 ? " " : ",") << qarg(op.qubits[i]);
        out << ";\n";
        break;
      }
    }
  }
  return out.str();
}

}  // namespace qforge
