#include "negot/io.hpp"

#include <cctype>
#include <sstream>

namespace negot {

namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " near '" + (tok_.kind == Token::End ? "<eof>" : tok_.text) + "'",
                     tok_.line, tok_.col);
  }

  Token expect_punct(const std::string& p) {
    if (tok_.kind != Token::Punct || tok_.text != p) fail("expected '" + p + "'");
    return take();
  }

  Token expect_ident() {
    if (tok_.kind != Token::Ident) fail("expected an identifier");
    return take();
  }

  bool at_punct(const std::string& p) const {
    return tok_.kind == Token::Punct && tok_.text == p;
  }

  bool at_ident(const std::string& s) const {
    return tok_.kind == Token::Ident && tok_.text == s;
  }

private:
  void advance() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '\n') { ++line_; col_ = 1; ++pos_; continue; }
      if (std::isspace(static_cast<unsigned char>(c))) { ++col_; ++pos_; continue; }
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    tok_ = {};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) { tok_.kind = Token::End; return; }
    char c = s_[pos_];
    auto idchar = [](char x) {
      return std::isalnum(static_cast<unsigned char>(x)) || x == '_';
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos_;
      while (pos_ < s_.size() && idchar(s_[pos_])) ++pos_;
      tok_.kind = Token::Ident;
      tok_.text = s_.substr(b, pos_ - b);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      tok_.kind = Token::Number;
      tok_.text = s_.substr(b, pos_ - b);
    } else if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
      tok_.kind = Token::Punct;
      tok_.text = "->";
      pos_ += 2;
    } else if (std::string("{}[]();,=.").find(c) != std::string::npos) {
      tok_.kind = Token::Punct;
      tok_.text = std::string(1, c);
      ++pos_;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    col_ = tok_.col + static_cast<int>(tok_.text.size());
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

Rat parse_rat_tok(Lexer& lx) {
  if (lx.peek().kind != Token::Number) lx.fail("expected a rational");
  Token t = lx.take();
  auto r = parse_rational(t.text);
  if (!r) throw ParseError("bad rational '" + t.text + "'", t.line, t.col);
  return *r;
}

} // namespace

Diagram parse_diagram(const std::string& text) {
  Lexer lx(text);
  if (!lx.at_ident("negotiation")) lx.fail("expected 'negotiation'");
  lx.take();
  std::string name = lx.expect_ident().text;
  lx.expect_punct("{");

  if (!lx.at_ident("processes")) lx.fail("expected 'processes'");
  lx.take();
  std::vector<std::string> procs;
  while (lx.peek().kind == Token::Ident) procs.push_back(lx.take().text);
  if (procs.empty()) lx.fail("expected at least one process");
  lx.expect_punct(";");

  DiagramBuilder b(name, procs);
  auto wrap = [&lx](auto&& fn) {
    try {
      fn();
    } catch (const ParseError&) {
      throw;
    } catch (const std::runtime_error& e) {
      lx.fail(e.what());
    }
  };

  while (lx.at_ident("node")) {
    lx.take();
    std::string nm = lx.expect_ident().text;
    lx.expect_punct("[");
    std::vector<std::string> dom;
    while (lx.peek().kind == Token::Ident) dom.push_back(lx.take().text);
    lx.expect_punct("]");
    bool is_init = false, is_fin = false;
    if (lx.at_ident("init")) { is_init = true; lx.take(); }
    else if (lx.at_ident("final")) { is_fin = true; lx.take(); }
    lx.expect_punct(";");
    wrap([&] { b.node(nm, dom, is_init, is_fin); });
  }

  while (lx.at_ident("outcome")) {
    lx.take();
    std::string node = lx.expect_ident().text;
    lx.expect_punct(".");
    std::string oname = lx.expect_ident().text;
    std::optional<Rat> prob, cost;
    std::map<std::string, Rat> time;
    while (lx.peek().kind == Token::Ident && !lx.at_ident("outcome")) {
      std::string key = lx.take().text;
      if (key == "prob") {
        lx.expect_punct("=");
        prob = parse_rat_tok(lx);
      } else if (key == "cost") {
        lx.expect_punct("=");
        cost = parse_rat_tok(lx);
      } else if (key == "time") {
        lx.expect_punct("(");
        std::string p = lx.expect_ident().text;
        lx.expect_punct(")");
        lx.expect_punct("=");
        time[p] = parse_rat_tok(lx);
      } else {
        lx.fail("unknown attribute '" + key + "'");
      }
    }
    lx.expect_punct("{");
    std::vector<std::pair<std::string, std::vector<std::string>>> moves;
    while (lx.peek().kind == Token::Ident) {
      std::string p = lx.take().text;
      lx.expect_punct("->");
      std::vector<std::string> succs{lx.expect_ident().text};
      while (lx.at_punct(",")) {
        lx.take();
        succs.push_back(lx.expect_ident().text);
      }
      lx.expect_punct(";");
      moves.push_back({p, std::move(succs)});
    }
    lx.expect_punct("}");
    wrap([&] { b.outcome(node, oname, moves, prob, cost, time); });
  }

  while (lx.at_ident("analysis")) {
    lx.take();
    AnalysisBlock blk;
    blk.name = lx.expect_ident().text;
    lx.expect_punct("{");
    while (lx.peek().kind == Token::Ident) {
      std::string key = lx.take().text;
      lx.expect_punct("=");
      std::string val;
      while (!lx.at_punct(";") && lx.peek().kind != Token::End) {
        if (!val.empty()) val += ' ';
        val += lx.take().text;
      }
      lx.expect_punct(";");
      blk.entries[key] = val;
    }
    lx.expect_punct("}");
    b.d.analyses.push_back(std::move(blk));
  }

  lx.expect_punct("}");
  if (lx.peek().kind != Token::End) lx.fail("trailing input");
  return b.take();
}

std::string render_diagram(const Diagram& d) {
  std::ostringstream os;
  os << "negotiation " << d.name << " {\n";
  os << "  processes";
  for (const auto& p : d.procs) os << ' ' << p;
  os << ";\n";
  for (Nid n = 0; n < d.nnodes(); ++n) {
    const NodeDef& nd = d.nodes[n];
    os << "  node " << nd.name << " [";
    for (std::size_t i = 0; i < nd.dom.size(); ++i)
      os << (i ? " " : "") << d.procs[nd.dom[i]];
    os << "]";
    if (n == d.init) os << " init";
    if (n == d.fin) os << " final";
    os << ";\n";
  }
  for (Nid n = 0; n < d.nnodes(); ++n) {
    const NodeDef& nd = d.nodes[n];
    for (const auto& o : nd.outs) {
      os << "  outcome " << nd.name << "." << o.name;
      if (o.prob) os << " prob=" << show_rational(*o.prob);
      if (o.cost) os << " cost=" << show_rational(*o.cost);
      for (const auto& [p, t] : o.time)
        os << " time(" << d.procs[p] << ")=" << show_rational(t);
      os << " {";
      for (const auto& [p, ts] : o.moves) {
        os << ' ' << d.procs[p] << " ->";
        for (std::size_t i = 0; i < ts.size(); ++i)
          os << (i ? ", " : " ") << d.nodes[ts[i]].name;
        os << ';';
      }
      os << " }\n";
    }
  }
  for (const auto& a : d.analyses) {
    os << "  analysis " << a.name << " {";
    for (const auto& [k, v] : a.entries) os << ' ' << k << '=' << v << ';';
    os << " }\n";
  }
  os << "}\n";
  return os.str();
}

std::string emit_dot(const Diagram& d) {
  std::ostringstream os;
  os << "digraph \"" << d.name << "\" {\n";
  os << "  rankdir=LR;\n  node [shape=record];\n";
  for (Nid n = 0; n < d.nnodes(); ++n) {
    const NodeDef& nd = d.nodes[n];
    os << "  " << nd.name << " [label=\"{" << nd.name << "|{";
    for (std::size_t i = 0; i < nd.dom.size(); ++i)
      os << (i ? "|" : "") << "<" << d.procs[nd.dom[i]] << ">"
         << d.procs[nd.dom[i]];
    os << "}}\"];\n";
  }
  for (Nid n = 0; n < d.nnodes(); ++n) {
    const NodeDef& nd = d.nodes[n];
    for (const auto& o : nd.outs)
      for (const auto& [p, ts] : o.moves)
        for (Nid t : ts)
          os << "  " << nd.name << ":" << d.procs[p] << " -> " << d.nodes[t].name
             << ":" << d.procs[p] << " [label=\"" << o.name << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string emit_dot(const Subnegotiation& s) { return emit_dot(s.d); }

std::string emit_dot(const ReductionTrace& t, int stage) {
  return emit_dot(t.snapshots.at(stage));
}

} // namespace negot
