#include "robotval/action/model_file.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "robotval/errors.hpp"

namespace robotval::action {

namespace {

struct Line {
  std::string text;
  std::size_t number;
};

const char* const kSections[] = {"objects", "sorts", "rigid", "fluents", "ops", "successor", "init", "grammar"};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool isIdent(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return true;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

/// Splits `head := body` at the first `:=`.
std::pair<std::string, std::string> splitDefinition(const Line& line) {
  auto pos = line.text.find(":=");
  if (pos == std::string::npos) throw ParseError("expected ':='", line.number);
  return {trim(std::string_view(line.text).substr(0, pos)), trim(std::string_view(line.text).substr(pos + 2))};
}

/// `name(a, b:Sort)` -> name, params, sorts (empty sort string when omitted).
struct Signature {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> sorts;
};

Signature parseSignature(const std::string& text, std::size_t line) {
  Signature sig;
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw ParseError("expected name(params) in '" + text + "'", line);
  sig.name = trim(std::string_view(text).substr(0, open));
  if (!isIdent(sig.name)) throw ParseError("bad name '" + sig.name + "'", line);
  for (const auto& w : words(std::string_view(text).substr(open + 1, text.size() - open - 2))) {
    auto colon = w.find(':');
    std::string param = colon == std::string::npos ? w : w.substr(0, colon);
    std::string sort = colon == std::string::npos ? "" : w.substr(colon + 1);
    if (!isIdent(param) || (colon != std::string::npos && !isIdent(sort)))
      throw ParseError("bad parameter '" + w + "'", line);
    sig.params.push_back(param);
    sig.sorts.push_back(sort);
  }
  return sig;
}

/// `Name/arity`
bool parseArityDecl(const std::string& w, std::string& name, std::size_t& arity) {
  auto slash = w.find('/');
  if (slash == std::string::npos) return false;
  name = w.substr(0, slash);
  const std::string digits = w.substr(slash + 1);
  if (!isIdent(name) || digits.empty()) return false;
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  arity = std::stoul(digits);
  return true;
}

Formula parseAt(const std::string& text, const logic::Vocabulary& vocab, std::span<const std::string> bound,
                std::size_t line) {
  try {
    return logic::parseFormula(text, vocab, bound);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
}

std::vector<std::string> rigidTokens(const std::string& text, std::size_t line) {
  // Split on whitespace/commas outside parentheses.
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw ParseError("unbalanced ')'", line);
    if (depth == 0 && (std::isspace(static_cast<unsigned char>(c)) || c == ',')) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (depth != 0) throw ParseError("unbalanced '('", line);
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

ModelFile parseModel(std::string_view text) {
  // Physical lines -> logical lines grouped by section.
  std::map<std::string, std::vector<Line>> sections;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  std::string pending;
  std::size_t pendingLine = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string t = trim(raw);
    bool continues = !t.empty() && t.back() == '\\';
    if (continues) t.pop_back();
    if (pending.empty()) pendingLine = number;
    pending += (pending.empty() ? "" : " ") + trim(t);
    if (continues) continue;
    std::string logical = trim(pending);
    pending.clear();
    if (logical.empty()) continue;

    // A section header is `name:` (possibly followed by content) with a known name.
    auto colon = logical.find(':');
    if (colon != std::string::npos && (colon + 1 == logical.size() || logical[colon + 1] != '=')) {
      std::string head = trim(std::string_view(logical).substr(0, colon));
      bool known = false;
      for (const char* s : kSections) known = known || head == s;
      if (known) {
        current = head;
        if (sections.count(current)) throw ParseError("section " + current + " appears twice", pendingLine);
        sections[current];
        std::string rest = trim(std::string_view(logical).substr(colon + 1));
        if (!rest.empty()) sections[current].push_back({rest, pendingLine});
        continue;
      }
    }
    if (current.empty()) throw ParseError("content before the first section header", pendingLine);
    sections[current].push_back({logical, pendingLine});
  }
  if (!pending.empty()) throw ParseError("dangling line continuation", pendingLine);

  ActionTheory::Definition def;
  logic::Vocabulary vocab;

  for (const auto& line : sections["objects"])
    for (const auto& w : words(line.text)) {
      if (!isIdent(w)) throw ParseError("bad object name '" + w + "'", line.number);
      def.objects.push_back(w);
      vocab.objects.insert(w);
    }

  for (const auto& line : sections["sorts"]) {
    auto [name, body] = splitDefinition(line);
    if (!isIdent(name)) throw ParseError("bad sort name '" + name + "'", line.number);
    def.sorts[name] = words(body);
    vocab.sorts.insert(name);
  }

  std::vector<std::pair<std::string, std::size_t>> rigidTruthText;
  for (const auto& line : sections["rigid"])
    for (const auto& w : rigidTokens(line.text, line.number)) {
      std::string name;
      std::size_t arity = 0;
      if (parseArityDecl(w, name, arity)) {
        def.predicates.push_back({name, arity, PredicateKind::Rigid});
        vocab.rigid[name] = arity;
      } else {
        rigidTruthText.emplace_back(w, line.number);
      }
    }

  struct PendingDerived {
    Signature sig;
    std::string body;
    std::size_t line;
  };
  std::vector<PendingDerived> explicitDerived;
  for (const auto& line : sections["fluents"]) {
    auto ws = words(line.text);
    if (ws.size() < 2 || (ws[0] != "primitive" && ws[0] != "derived"))
      throw ParseError("expected 'primitive Name/n' or 'derived ...'", line.number);
    const std::string rest = trim(std::string_view(line.text).substr(line.text.find(ws[0]) + ws[0].size()));
    if (ws[0] == "primitive") {
      std::string name;
      std::size_t arity = 0;
      if (ws.size() != 2 || !parseArityDecl(ws[1], name, arity)) throw ParseError("expected 'primitive Name/n'", line.number);
      def.predicates.push_back({name, arity, PredicateKind::Primitive});
      vocab.fluents[name] = arity;
      continue;
    }
    auto [head, body] = splitDefinition({rest, line.number});
    std::string name;
    std::size_t arity = 0;
    if (parseArityDecl(head, name, arity)) {
      // derived In/2 := closure(Loc)
      std::string b = body;
      if (b.rfind("closure(", 0) != 0 || b.back() != ')') throw ParseError("expected closure(Fluent)", line.number);
      DerivedFluentDef d;
      d.fluent = name;
      d.kind = DerivedFluentDef::Kind::TransitiveClosure;
      d.closureOf = trim(std::string_view(b).substr(8, b.size() - 9));
      def.derived.push_back(d);
    } else {
      Signature sig = parseSignature(head, line.number);
      name = sig.name;
      arity = sig.params.size();
      explicitDerived.push_back({sig, body, line.number});
    }
    def.predicates.push_back({name, arity, PredicateKind::Derived});
    vocab.fluents[name] = arity;
  }

  struct PendingOp {
    Signature sig;
    std::string body;
    std::size_t line;
  };
  std::vector<PendingOp> ops;
  for (const auto& line : sections["ops"]) {
    auto [head, body] = splitDefinition(line);
    Signature sig = parseSignature(head, line.number);
    vocab.operations[sig.name] = sig.params.size();
    ops.push_back({sig, body, line.number});
  }

  for (const auto& [text, lineNo] : rigidTruthText) {
    Signature sig = parseSignature(text, lineNo);
    auto it = vocab.rigid.find(sig.name);
    if (it == vocab.rigid.end()) throw ParseError("truth for undeclared rigid predicate " + sig.name, lineNo);
    if (it->second != sig.params.size()) throw ParseError("wrong arity for rigid predicate " + sig.name, lineNo);
    for (const auto& a : sig.params)
      if (!vocab.objects.count(a)) throw ParseError("unknown object " + a, lineNo);
    def.rigidTruths.insert(GroundAtom{sig.name, sig.params});
  }

  for (const auto& p : explicitDerived) {
    DerivedFluentDef d;
    d.fluent = p.sig.name;
    d.kind = DerivedFluentDef::Kind::Explicit;
    d.params = p.sig.params;
    d.definition = parseAt(p.body, vocab, d.params, p.line);
    def.derived.push_back(std::move(d));
  }

  for (const auto& p : ops) {
    OperationDecl op;
    op.name = p.sig.name;
    op.params = p.sig.params;
    for (const auto& s : p.sig.sorts) op.paramSorts.push_back(s.empty() ? std::string(logic::kDefaultSort) : s);
    op.precondition = parseAt(p.body, vocab, op.params, p.line);
    def.operations.push_back(std::move(op));
  }

  // successor: `F(params) + := gamma` and `F(params) - := gamma`
  std::map<std::string, SuccessorAxiom> axioms;
  std::map<std::string, std::pair<bool, bool>> seen;
  std::vector<std::string> axiomOrder;
  for (const auto& line : sections["successor"]) {
    auto [head, body] = splitDefinition(line);
    if (head.size() < 2 || (head.back() != '+' && head.back() != '-'))
      throw ParseError("successor line must end its head with '+' or '-'", line.number);
    const bool plus = head.back() == '+';
    Signature sig = parseSignature(trim(std::string_view(head).substr(0, head.size() - 1)), line.number);
    auto [it, inserted] = axioms.try_emplace(sig.name);
    if (inserted) {
      it->second.fluent = sig.name;
      it->second.params = sig.params;
      axiomOrder.push_back(sig.name);
    } else if (it->second.params != sig.params) {
      throw ParseError("parameters of " + sig.name + " differ between gamma+ and gamma-", line.number);
    }
    auto& flags = seen[sig.name];
    bool& already = plus ? flags.first : flags.second;
    if (already) throw ParseError(std::string("duplicate gamma") + (plus ? "+" : "-") + " for " + sig.name, line.number);
    already = true;
    (plus ? it->second.gammaPlus : it->second.gammaMinus) = parseAt(body, vocab, sig.params, line.number);
  }
  for (const auto& name : axiomOrder) {
    if (!seen[name].first || !seen[name].second) throw ModelError("successor axiom for " + name + " needs both + and -");
    def.successors.push_back(axioms[name]);
  }

  for (const auto& line : sections["init"]) def.initialAxioms.push_back(parseAt(line.text, vocab, {}, line.number));

  std::vector<GrammarRuleText> grammar;
  for (const auto& line : sections["grammar"]) {
    auto colon = line.text.find(':');
    auto arrow = line.text.find("::=");
    if (colon == std::string::npos || arrow == std::string::npos || colon >= arrow)
      throw ParseError("expected 'id: LHS ::= RHS'", line.number);
    GrammarRuleText r;
    r.id = trim(std::string_view(line.text).substr(0, colon));
    r.lhs = trim(std::string_view(line.text).substr(colon + 1, arrow - colon - 1));
    r.rhs = trim(std::string_view(line.text).substr(arrow + 3));
    r.line = line.number;
    if (!isIdent(r.id) || !isIdent(r.lhs)) throw ParseError("bad rule id or nonterminal", line.number);
    grammar.push_back(std::move(r));
  }

  return ModelFile{ActionTheory(std::move(def)), std::move(grammar)};
}

ModelFile loadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseModel(buf.str());
}

}  // namespace robotval::action
