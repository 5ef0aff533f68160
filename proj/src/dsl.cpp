#include "vmc/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace vmc {

const ModelDocument::PropDecl* ModelDocument::find_prop(const std::string& name) const {
  for (const auto& p : props)
    if (p.name == name) return &p;
  return nullptr;
}

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;

  int line_at(size_t p) const {
    int line = 1;
    for (size_t i = 0; i < p && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    return line;
  }
  int col_at(size_t p) const {
    int col = 1;
    for (size_t i = 0; i < p && i < text.size(); ++i)
      col = text[i] == '\n' ? 1 : col + 1;
    return col;
  }
  [[noreturn]] void fail(const std::string& msg, size_t at) const {
    throw DslError(msg, line_at(at), col_at(at));
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos); }

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  bool peek_is(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }
  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool word_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }
  std::string word() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && word_char(text[pos])) ++pos;
    if (start == pos) fail("expected identifier");
    return text.substr(start, pos - start);
  }
  // Raw text up to (not including) the next ';' at nesting level zero.
  std::string until_semicolon() {
    skip_ws();
    size_t start = pos;
    int depth = 0;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') --depth;
      if (c == ';' && depth == 0) break;
      ++pos;
    }
    if (pos >= text.size()) fail("expected ';'", start);
    return text.substr(start, pos - start);
  }
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {"format-version", "feature", "configs", "state",
                                           "init",           "label",   "trans",   "on",
                                           "when",           "prop",    "true",    "false"};
  return kw;
}

void check_name(Cursor& cur, const std::string& name, size_t at) {
  if (keywords().count(name)) cur.fail("'" + name + "' is a reserved keyword", at);
}

}  // namespace

ModelDocument parse_model(const std::string& text) {
  Cursor cur{text};
  ModelDocument doc;

  cur.skip_ws();
  size_t head_at = cur.pos;
  if (cur.eof() || cur.text.compare(cur.pos, 14, "format-version") != 0)
    cur.fail("model must start with 'format-version 1;'", head_at);
  cur.pos += 14;
  std::string version = cur.word();
  if (version != "1") cur.fail("unsupported format version '" + version + "'", head_at);
  cur.expect(';');

  bool saw_configs = false;
  while (!cur.eof()) {
    size_t at = cur.pos;
    std::string kw = cur.word();
    if (kw == "feature") {
      while (true) {
        size_t name_at = cur.pos;
        std::string name = cur.word();
        check_name(cur, name, name_at);
        doc.features.push_back(name);
        if (cur.peek_is(',')) {
          cur.expect(',');
          continue;
        }
        break;
      }
      cur.expect(';');
    } else if (kw == "configs") {
      if (saw_configs) cur.fail("duplicate 'configs' clause", at);
      saw_configs = true;
      size_t expr_at = cur.pos;
      std::string expr = cur.until_semicolon();
      try {
        doc.configs = parse_feat_expr(expr);
      } catch (const ParseError& e) {
        cur.fail(std::string("in configs clause: ") + e.what(), expr_at + e.offset);
      }
      cur.expect(';');
    } else if (kw == "state") {
      ModelDocument::StateDecl st;
      size_t name_at = cur.pos;
      st.name = cur.word();
      check_name(cur, st.name, name_at);
      while (!cur.peek_is(';')) {
        size_t mark_at = cur.pos;
        std::string mark = cur.word();
        if (mark == "init") {
          st.init = true;
        } else if (mark == "label") {
          while (true) {
            size_t lab_at = cur.pos;
            std::string lab = cur.word();
            check_name(cur, lab, lab_at);
            st.labels.push_back(lab);
            if (cur.peek_is(',')) {
              cur.expect(',');
              continue;
            }
            break;
          }
        } else {
          cur.fail("expected 'init', 'label' or ';'", mark_at);
        }
      }
      cur.expect(';');
      doc.states.push_back(std::move(st));
    } else if (kw == "trans") {
      ModelDocument::TransDecl tr;
      tr.src = cur.word();
      cur.skip_ws();
      if (cur.text.compare(cur.pos, 2, "->") != 0) cur.fail("expected '->'");
      cur.pos += 2;
      tr.dst = cur.word();
      size_t on_at = cur.pos;
      if (cur.word() != "on") cur.fail("expected 'on'", on_at);
      size_t act_at = cur.pos;
      tr.action = cur.word();
      check_name(cur, tr.action, act_at);
      if (!cur.peek_is(';')) {
        size_t when_at = cur.pos;
        if (cur.word() != "when") cur.fail("expected 'when' or ';'", when_at);
        size_t expr_at = cur.pos;
        std::string expr = cur.until_semicolon();
        try {
          tr.when = parse_feat_expr(expr);
        } catch (const ParseError& e) {
          cur.fail(std::string("in when clause: ") + e.what(), expr_at + e.offset);
        }
      }
      cur.expect(';');
      doc.trans.push_back(std::move(tr));
    } else if (kw == "prop") {
      ModelDocument::PropDecl pr;
      size_t name_at = cur.pos;
      pr.name = cur.word();
      check_name(cur, pr.name, name_at);
      cur.skip_ws();
      if (cur.text.compare(cur.pos, 2, ":=") != 0) cur.fail("expected ':='");
      cur.pos += 2;
      size_t expr_at = cur.pos;
      std::string expr = cur.until_semicolon();
      try {
        pr.formula = parse_ctl(expr);
      } catch (const ParseError& e) {
        cur.fail(std::string("in property: ") + e.what(), expr_at + e.offset);
      }
      cur.expect(';');
      doc.props.push_back(std::move(pr));
    } else {
      cur.fail("unknown declaration '" + kw + "'", at);
    }
  }
  return doc;
}

std::string print_model(const ModelDocument& doc) {
  std::ostringstream os;
  os << "format-version 1;\n\n";
  if (!doc.features.empty()) {
    os << "feature ";
    for (size_t i = 0; i < doc.features.size(); ++i) {
      if (i) os << ", ";
      os << doc.features[i];
    }
    os << ";\n";
  }
  os << "configs " << print_feat_expr(doc.configs) << ";\n\n";
  for (const auto& st : doc.states) {
    os << "state " << st.name;
    if (st.init) os << " init";
    if (!st.labels.empty()) {
      os << " label ";
      for (size_t i = 0; i < st.labels.size(); ++i) {
        if (i) os << ", ";
        os << st.labels[i];
      }
    }
    os << ";\n";
  }
  os << "\n";
  for (const auto& tr : doc.trans) {
    os << "trans " << tr.src << " -> " << tr.dst << " on " << tr.action;
    if (!tr.when.is_const_true()) os << " when " << print_feat_expr(tr.when);
    os << ";\n";
  }
  if (!doc.props.empty()) {
    os << "\n";
    for (const auto& pr : doc.props)
      os << "prop " << pr.name << " := " << print_ctl(pr.formula) << ";\n";
  }
  return os.str();
}

Fts build_fts(const ModelDocument& doc) {
  SystemCore core;
  std::map<std::string, int> state_ids;
  for (const auto& st : doc.states) {
    if (state_ids.count(st.name))
      throw Error("DUPLICATE_STATE", "state '" + st.name + "' declared twice");
    state_ids[st.name] = static_cast<int>(core.states.size());
    core.states.push_back(st.name);
  }
  // Atomic propositions in first-appearance order.
  std::map<std::string, int> prop_ids;
  for (const auto& st : doc.states)
    for (const auto& lab : st.labels)
      if (!prop_ids.count(lab)) {
        prop_ids[lab] = static_cast<int>(core.props.size());
        core.props.push_back(lab);
      }
  if (core.props.size() > 64)
    throw Error("PROP_BUDGET", "more than 64 atomic propositions");
  core.labels.assign(core.states.size(), 0);
  for (const auto& st : doc.states) {
    uint64_t bits = 0;
    for (const auto& lab : st.labels) bits |= 1ull << prop_ids[lab];
    core.labels[static_cast<size_t>(state_ids[st.name])] = bits;
    if (st.init) core.initial.push_back(state_ids[st.name]);
  }
  std::sort(core.initial.begin(), core.initial.end());
  if (core.initial.empty())
    throw Error("NO_INITIAL_STATE", "model declares no initial state");

  ConfigSpace space(doc.features, doc.configs);
  if (space.valid_configs().empty())
    throw Error("EMPTY_CONFIG_SPACE", "the configs clause admits no configuration");

  Fts fts{std::move(core), {}, {}, std::move(space)};
  std::map<std::string, int> action_ids;
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& tr : doc.trans) {
    auto src = state_ids.find(tr.src);
    if (src == state_ids.end())
      throw Error("UNKNOWN_STATE", "transition references undeclared state '" + tr.src + "'");
    auto dst = state_ids.find(tr.dst);
    if (dst == state_ids.end())
      throw Error("UNKNOWN_STATE", "transition references undeclared state '" + tr.dst + "'");
    auto act = action_ids.find(tr.action);
    if (act == action_ids.end()) {
      act = action_ids.emplace(tr.action, static_cast<int>(fts.core.actions.size())).first;
      fts.core.actions.push_back(tr.action);
    }
    for (int feat : mentioned_features(tr.when))
      fts.space.feature_index(feat);  // throws UNKNOWN_FEATURE
    Transition t{src->second, act->second, dst->second};
    if (!seen.insert(std::tuple<int, int, int>(t.src, t.action, t.dst)).second)
      throw Error("DUPLICATE_TRANSITION",
                  "transition " + tr.src + " -" + tr.action + "-> " + tr.dst +
                      " declared twice");
    fts.trans.push_back(t);
    fts.presence.push_back(tr.when);
  }
  return fts;
}

ModelDocument apply_invar(const ModelDocument& doc, const FeatExpr& e) {
  ModelDocument out = doc;
  out.configs = FeatExpr::conj(doc.configs, e);
  ConfigSpace space(out.features, out.configs);
  if (space.valid_configs().empty())
    throw Error("EMPTY_CONFIG_SPACE", "the added constraint admits no configuration");
  // pi_K' keeps only transitions some remaining configuration admits.
  out.trans.clear();
  for (const auto& tr : doc.trans)
    if (satisfiable_in(tr.when, space)) out.trans.push_back(tr);
  return out;
}

ModelDocument apply_abstraction_syntactic(const ModelDocument& doc, const Abstraction& a,
                                          ComponentMode mode) {
  Fts fts = build_fts(doc);  // for the concrete space
  AbstractSpace abs = a.abstract_space(fts.space);

  ModelDocument out;
  out.states = doc.states;
  out.props = doc.props;
  out.features = abs.space.feature_names();
  out.configs = abs.space.constraint();
  for (const auto& tr : doc.trans) {
    FeatExpr rewritten = mode == ComponentMode::May ? a.alpha_may(tr.when, fts.space)
                                                    : a.alpha_must(tr.when, fts.space);
    if (!satisfiable(rewritten)) continue;
    ModelDocument::TransDecl nt = tr;
    nt.when = rewritten;
    out.trans.push_back(std::move(nt));
  }
  return out;
}

CtlFormula parse_property(const std::string& text) { return parse_ctl(text); }

bool fts_equivalent(const Fts& a, const Fts& b) {
  if (a.core.states != b.core.states) return false;
  if (a.core.initial != b.core.initial) return false;
  // Labeling compared as name sets per state; proposition order is free.
  for (size_t s = 0; s < a.core.states.size(); ++s) {
    std::set<std::string> la, lb;
    for (size_t p = 0; p < a.core.props.size(); ++p)
      if (a.core.has_label(static_cast<int>(s), static_cast<int>(p))) la.insert(a.core.props[p]);
    for (size_t p = 0; p < b.core.props.size(); ++p)
      if (b.core.has_label(static_cast<int>(s), static_cast<int>(p))) lb.insert(b.core.props[p]);
    if (la != lb) return false;
  }
  if (a.space.feature_names() != b.space.feature_names()) return false;
  {
    const auto& ka = a.space.valid_configs();
    const auto& kb = b.space.valid_configs();
    if (ka.size() != kb.size()) return false;
    for (size_t i = 0; i < ka.size(); ++i)
      if (!(ka[i] == kb[i])) return false;
  }
  if (a.trans.size() != b.trans.size()) return false;
  // Compare as (srcName, action, dstName) sets with equivalent conditions.
  auto key = [](const Fts& f, size_t i) {
    const Transition& t = f.trans[i];
    return std::tuple<std::string, std::string, std::string>(
        f.core.states[static_cast<size_t>(t.src)],
        f.core.actions[static_cast<size_t>(t.action)],
        f.core.states[static_cast<size_t>(t.dst)]);
  };
  std::map<std::tuple<std::string, std::string, std::string>, size_t> index_b;
  for (size_t i = 0; i < b.trans.size(); ++i) index_b[key(b, i)] = i;
  for (size_t i = 0; i < a.trans.size(); ++i) {
    auto it = index_b.find(key(a, i));
    if (it == index_b.end()) return false;
    if (!equiv(a.presence[i], b.presence[it->second])) return false;
  }
  return true;
}

}  // namespace vmc
