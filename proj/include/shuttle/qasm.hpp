#pragma once

#include "shuttle/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shuttle {

/// Syntax or semantic error in QASM input, with a 1-based source position.
class QasmError : public std::runtime_error {
public:
  QasmError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + msg),
        line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Input is valid QASM but uses something outside the supported subset.
class QasmUnsupported : public QasmError {
public:
  QasmUnsupported(const std::string& construct, std::size_t line, std::size_t column)
      : QasmError("unsupported construct '" + construct + "'", line, column),
        construct_(construct) {}

  const std::string& construct() const { return construct_; }

private:
  std::string construct_;
};

namespace detail {

struct Token {
  enum class Type { Ident, Number, String, Symbol, Arrow, End };
  Type type = Type::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.type = Token::Type::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.type = Token::Type::Number;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
          t.text += advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
          t.text += advance();
          if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
            t.text += advance();
          }
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            t.text += advance();
          }
        }
      } else if (c == '"') {
        t.type = Token::Type::String;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"') {
          t.text += advance();
        }
        if (pos_ >= src_.size()) {
          throw QasmError("unterminated string", t.line, t.column);
        }
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.type = Token::Type::Arrow;
        t.text = "->";
        advance();
        advance();
      } else if (std::string_view("[](),;+-*/^{}=<>").find(c) != std::string_view::npos) {
        t.type = Token::Type::Symbol;
        t.text = std::string(1, advance());
      } else {
        throw QasmError(std::string("unexpected character '") + c + "'", t.line, t.column);
      }
      out.push_back(std::move(t));
    }
  }

private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          advance();
        }
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Circuit run() {
    if (peek_ident("OPENQASM")) {
      next();
      const auto& v = expect(Token::Type::Number, "version number");
      if (v.text.rfind("2", 0) != 0) {
        throw QasmUnsupported("OPENQASM " + v.text, v.line, v.column);
      }
      expect_symbol(";");
    }
    while (cur().type != Token::Type::End) {
      statement();
    }
    if (!qreg_) {
      throw QasmError("no quantum register declared", cur().line, cur().column);
    }
    Circuit c(qreg_size_);
    c.gates = std::move(gates_);
    return c;
  }

private:
  using Type = Token::Type;

  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool peek_ident(std::string_view s) const {
    return cur().type == Type::Ident && cur().text == s;
  }
  bool peek_symbol(std::string_view s) const {
    return cur().type == Type::Symbol && cur().text == s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const auto& t = cur();
    const std::string got = t.type == Type::End ? "end of input" : "'" + t.text + "'";
    throw QasmError("expected " + what + ", found " + got, t.line, t.column);
  }

  const Token& expect(Type type, const std::string& what) {
    if (cur().type != type) {
      fail(what);
    }
    return next();
  }

  void expect_symbol(std::string_view s) {
    if (!peek_symbol(s)) {
      fail("'" + std::string(s) + "'");
    }
    next();
  }

  std::size_t integer() {
    const auto& t = expect(Type::Number, "integer");
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
      throw QasmError("invalid integer '" + t.text + "'", t.line, t.column);
    }
    return v;
  }

  void statement() {
    const Token& head = cur();
    if (head.type != Type::Ident) {
      fail("statement");
    }
    const std::string kw = head.text;
    if (kw == "include") {
      next();
      expect(Type::String, "file name");
      expect_symbol(";");
      return;
    }
    if (kw == "qreg" || kw == "creg") {
      declaration(kw == "qreg");
      return;
    }
    if (kw == "gate" || kw == "opaque" || kw == "if" || kw == "reset") {
      throw QasmUnsupported(kw, head.line, head.column);
    }
    if (kw == "measure") {
      next();
      auto qs = operand();
      if (cur().type != Type::Arrow) {
        fail("'->'");
      }
      next();
      creg_operand();
      expect_symbol(";");
      for (auto q : qs) {
        gates_.push_back(make_gate(GateKind::MEASURE, q));
      }
      return;
    }
    if (kw == "barrier") {
      next();
      std::vector<std::size_t> qs;
      while (true) {
        auto part = operand();
        qs.insert(qs.end(), part.begin(), part.end());
        if (!peek_symbol(",")) {
          break;
        }
        next();
      }
      expect_symbol(";");
      gates_.push_back(Gate{GateKind::BARRIER, dedup(qs), {}});
      return;
    }
    gate_call();
  }

  static std::vector<std::size_t> dedup(const std::vector<std::size_t>& qs) {
    std::vector<std::size_t> out;
    for (auto q : qs) {
      if (std::find(out.begin(), out.end(), q) == out.end()) {
        out.push_back(q);
      }
    }
    return out;
  }

  void declaration(bool quantum) {
    const Token kw = next();
    const auto& name = expect(Type::Ident, "register name");
    expect_symbol("[");
    const auto size = integer();
    expect_symbol("]");
    expect_symbol(";");
    if (quantum) {
      if (qreg_) {
        throw QasmUnsupported("multiple quantum registers", kw.line, kw.column);
      }
      if (size == 0) {
        throw QasmError("empty quantum register", kw.line, kw.column);
      }
      qreg_ = name.text;
      qreg_size_ = size;
    } else {
      if (creg_) {
        throw QasmUnsupported("multiple classical registers", kw.line, kw.column);
      }
      creg_ = name.text;
      creg_size_ = size;
    }
  }

  /// `q` (whole register) or `q[i]`.
  std::vector<std::size_t> operand() {
    const Token& t = expect(Type::Ident, "qubit operand");
    if (!qreg_ || t.text != *qreg_) {
      throw QasmError("unknown quantum register '" + t.text + "'", t.line, t.column);
    }
    if (!peek_symbol("[")) {
      std::vector<std::size_t> all(qreg_size_);
      for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
      }
      return all;
    }
    next();
    const Token& idx_tok = cur();
    const auto idx = integer();
    expect_symbol("]");
    if (idx >= qreg_size_) {
      throw QasmError("qubit index " + std::to_string(idx) + " out of range for " +
                          t.text + "[" + std::to_string(qreg_size_) + "]",
                      idx_tok.line, idx_tok.column);
    }
    return {idx};
  }

  void creg_operand() {
    const Token& t = expect(Type::Ident, "classical operand");
    if (!creg_ || t.text != *creg_) {
      throw QasmError("unknown classical register '" + t.text + "'", t.line, t.column);
    }
    if (peek_symbol("[")) {
      next();
      const Token& idx_tok = cur();
      const auto idx = integer();
      expect_symbol("]");
      if (idx >= creg_size_) {
        throw QasmError("bit index out of range", idx_tok.line, idx_tok.column);
      }
    }
  }

  void gate_call() {
    static const std::map<std::string, GateKind, std::less<>> kinds = {
        {"x", GateKind::X},     {"y", GateKind::Y},       {"z", GateKind::Z},
        {"h", GateKind::H},     {"s", GateKind::S},       {"sdg", GateKind::Sdg},
        {"t", GateKind::T},     {"tdg", GateKind::Tdg},   {"rx", GateKind::RX},
        {"ry", GateKind::RY},   {"rz", GateKind::RZ},     {"cx", GateKind::CX},
        {"CX", GateKind::CX},   {"cz", GateKind::CZ},     {"swap", GateKind::SWAP},
    };
    const Token head = next();
    const auto it = kinds.find(head.text);
    if (it == kinds.end()) {
      throw QasmUnsupported(head.text, head.line, head.column);
    }
    const GateKind kind = it->second;
    std::optional<double> angle;
    if (peek_symbol("(")) {
      if (!is_rotation(kind)) {
        fail("qubit operand");
      }
      next();
      angle = expression();
      expect_symbol(")");
    } else if (is_rotation(kind)) {
      fail("'(' with rotation angle");
    }
    std::vector<std::vector<std::size_t>> args;
    while (true) {
      args.push_back(operand());
      if (!peek_symbol(",")) {
        break;
      }
      next();
    }
    expect_symbol(";");
    const std::size_t arity = is_two_qubit(kind) ? 2 : 1;
    if (args.size() != arity) {
      throw QasmError(head.text + " expects " + std::to_string(arity) + " operand(s)",
                      head.line, head.column);
    }
    // Register broadcast: every whole-register operand expands element-wise.
    std::size_t width = 1;
    for (const auto& a : args) {
      if (a.size() > 1) {
        if (width > 1 && a.size() != width) {
          throw QasmError("mismatched register sizes", head.line, head.column);
        }
        width = a.size();
      }
    }
    for (std::size_t k = 0; k < width; ++k) {
      Gate g{kind, {}, angle};
      for (const auto& a : args) {
        g.qubits.push_back(a.size() == 1 ? a[0] : a[k]);
      }
      try {
        check_gate(g, qreg_size_);
      } catch (const CircuitError& e) {
        throw QasmError(e.what(), head.line, head.column);
      }
      gates_.push_back(std::move(g));
    }
  }

  // expr := term (('+'|'-') term)*
  double expression() {
    double v = term();
    while (peek_symbol("+") || peek_symbol("-")) {
      const bool plus = next().text == "+";
      const double rhs = term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (peek_symbol("*") || peek_symbol("/")) {
      const bool mul = next().text == "*";
      const double rhs = unary();
      v = mul ? v * rhs : v / rhs;
    }
    return v;
  }

  double unary() {
    if (peek_symbol("-")) {
      next();
      return -unary();
    }
    return primary();
  }

  double primary() {
    const Token& t = cur();
    if (t.type == Type::Number) {
      next();
      char* end = nullptr;
      const double v = std::strtod(t.text.c_str(), &end);
      if (end != t.text.c_str() + t.text.size()) {
        throw QasmError("invalid number '" + t.text + "'", t.line, t.column);
      }
      return v;
    }
    if (t.type == Type::Ident) {
      if (t.text == "pi") {
        next();
        return std::numbers::pi;
      }
      throw QasmUnsupported("expression term '" + t.text + "'", t.line, t.column);
    }
    if (peek_symbol("(")) {
      next();
      const double v = expression();
      expect_symbol(")");
      return v;
    }
    if (peek_symbol("^")) {
      throw QasmUnsupported("^", t.line, t.column);
    }
    fail("expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::optional<std::string> qreg_;
  std::size_t qreg_size_ = 0;
  std::optional<std::string> creg_;
  std::size_t creg_size_ = 0;
  std::vector<Gate> gates_;
};

} // namespace detail

/// Parses the OpenQASM 2.0 subset: one qreg, an optional creg, the gates
/// x y z h s sdg t tdg rx ry rz cx cz swap, measure and barrier.
inline Circuit parse_qasm(std::string_view text) {
  detail::Lexer lexer(text);
  detail::Parser parser(lexer.run());
  return parser.run();
}

/// Writes `c` in the subset accepted by parse_qasm. Angles are printed with
/// round-trip precision.
inline std::string export_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  os << "qreg q[" << c.num_qubits << "];\n";
  bool has_measure = false;
  for (const auto& g : c.gates) {
    has_measure = has_measure || g.kind == GateKind::MEASURE;
  }
  if (has_measure) {
    os << "creg c[" << c.num_qubits << "];\n";
  }
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::MEASURE) {
      os << "measure q[" << g.qubits[0] << "] -> c[" << g.qubits[0] << "];\n";
      continue;
    }
    os << to_string(g.kind);
    if (g.angle) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *g.angle);
      os << "(" << buf << ")";
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      os << (i == 0 ? " " : ",") << "q[" << g.qubits[i] << "]";
    }
    os << ";\n";
  }
  return os.str();
}

} // namespace shuttle
