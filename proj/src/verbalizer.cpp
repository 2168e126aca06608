// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mathreader/verbalizer.hpp"

#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "mathreader/math_parser.hpp"
#include "mathreader/text_util.hpp"

namespace mathreader {

namespace {

// Keep data/verbalization_rules.txt identical to this table; a test compares
// the two so edits cannot drift apart.
constexpr std::string_view kRulesText =
    R"RULES(# Pronunciation rules. One `key = phrase` per line, # starts a comment.
# Namespaces: word.* structural words, rel.* infix operators, bigop.* big
# operators, func.* functions, sym.* named symbols, fence.* fence names.

word.power = to the power of
word.over = over
word.sub = sub
word.from = from
word.to = to
word.of = of
word.as = as
word.sqrt = the square root of
word.root_prefix = the degree
word.root_suffix = root of
word.quantity = the quantity
word.end_quantity = end quantity

rel.plus = plus
rel.minus = minus
rel.times = times
rel.equals = equals
rel.lt = is less than
rel.gt = is greater than
rel.leq = is less than or equal to
rel.geq = is greater than or equal to
rel.neq = is not equal to
rel.approx = is approximately

bigop.sum = sum
bigop.prod = product
bigop.int = integral
bigop.lim = limit

func.sin = sine
func.cos = cosine
func.tan = tangent
func.cot = cotangent
func.sec = secant
func.csc = cosecant
func.arcsin = arc sine
func.arccos = arc cosine
func.arctan = arc tangent
func.sinh = hyperbolic sine
func.cosh = hyperbolic cosine
func.tanh = hyperbolic tangent
func.log = log
func.ln = natural log
func.exp = the exponential
func.det = the determinant
func.gcd = the greatest common divisor
func.min = the minimum
func.max = the maximum

sym.alpha = alpha
sym.beta = beta
sym.gamma = gamma
sym.delta = delta
sym.epsilon = epsilon
sym.varepsilon = epsilon
sym.zeta = zeta
sym.eta = eta
sym.theta = theta
sym.vartheta = theta
sym.iota = iota
sym.kappa = kappa
sym.lambda = lambda
sym.mu = mu
sym.nu = nu
sym.xi = xi
sym.pi = pi
sym.varpi = pi
sym.rho = rho
sym.varrho = rho
sym.sigma = sigma
sym.varsigma = sigma
sym.tau = tau
sym.upsilon = upsilon
sym.phi = phi
sym.varphi = phi
sym.chi = chi
sym.psi = psi
sym.omega = omega
sym.Gamma = capital gamma
sym.Delta = capital delta
sym.Theta = capital theta
sym.Lambda = capital lambda
sym.Xi = capital xi
sym.Pi = capital pi
sym.Sigma = capital sigma
sym.Upsilon = capital upsilon
sym.Phi = capital phi
sym.Psi = capital psi
sym.Omega = capital omega

sym.infty = infinity
sym.partial = partial
sym.nabla = nabla
sym.pm = plus or minus
sym.mp = minus or plus
sym.div = divided by
sym.ast = star
sym.star = star
sym.circ = composed with
sym.bullet = dot
sym.degree = degrees
sym.prime = prime
sym.ell = ell
sym.hbar = h bar
sym.emptyset = the empty set
sym.in = is in
sym.notin = is not in
sym.ni = contains
sym.subset = is a subset of
sym.supset = is a superset of
sym.subseteq = is a subset of
sym.supseteq = is a superset of
sym.cup = union
sym.cap = intersect
sym.setminus = set minus
sym.equiv = is equivalent to
sym.sim = is similar to
sym.simeq = is similar to
sym.cong = is congruent to
sym.propto = is proportional to
sym.perp = is perpendicular to
sym.parallel = is parallel to
sym.angle = angle
sym.forall = for all
sym.exists = there exists
sym.neg = not
sym.lor = or
sym.land = and
sym.oplus = direct sum
sym.otimes = tensor
sym.dagger = dagger
sym.ldots = dot dot dot
sym.cdots = dot dot dot
sym.dots = dot dot dot
sym.to = approaches
sym.rightarrow = approaches
sym.leftarrow = left arrow
sym.longrightarrow = approaches
sym.Rightarrow = implies
sym.Leftarrow = is implied by
sym.leftrightarrow = if and only if
sym.Leftrightarrow = if and only if
sym.mapsto = maps to
sym.uparrow = up arrow
sym.downarrow = down arrow
sym.vert = bar
sym.Vert = double bar
sym.backslash = backslash
sym.lbrace = open brace
sym.rbrace = close brace
sym.langle = open angle bracket
sym.rangle = close angle bracket
sym.lfloor = left floor
sym.rfloor = right floor
sym.lceil = left ceiling
sym.rceil = right ceiling
sym.mid = such that
sym.aleph = aleph
sym.Re = the real part of
sym.Im = the imaginary part of
sym.top = top
sym.bot = bottom

sym.! = factorial
sym.' = prime
sym.| = bar
sym./ = over

fence.open_paren = open paren
fence.close_paren = close paren
fence.open_bracket = open bracket
fence.close_bracket = close bracket
fence.open_brace = open brace
fence.close_brace = close brace
fence.bar = bar
fence.double_bar = double bar
fence.open_angle = open angle bracket
fence.close_angle = close angle bracket
fence.left_floor = left floor
fence.right_floor = right floor
fence.left_ceiling = left ceiling
fence.right_ceiling = right ceiling
)RULES";

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

void parse_rules_text(std::string_view text, const std::string& source_label,
                      std::unordered_map<std::string, std::string>& out) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::runtime_error(source_label + ":" + std::to_string(line_no) +
                               ": expected `key = phrase`");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(source_label + ":" + std::to_string(line_no) +
                               ": empty key");
    }
    out[std::string(key)] = std::string(value);
  }
}

// Spoken name for one ASCII character, or "" for whitespace.
std::string_view char_name(char c) {
  switch (c) {
    case '{': return "open brace";
    case '}': return "close brace";
    case '(': return "open paren";
    case ')': return "close paren";
    case '[': return "open bracket";
    case ']': return "close bracket";
    case '^': return "caret";
    case '_': return "underscore";
    case '$': return "dollar";
    case '&': return "ampersand";
    case '#': return "hash";
    case '%': return "percent";
    case '+': return "plus";
    case '-': return "dash";
    case '*': return "star";
    case '/': return "slash";
    case '=': return "equals";
    case '<': return "less than";
    case '>': return "greater than";
    case '|': return "bar";
    case '!': return "exclamation";
    case '?': return "question mark";
    case ',': return "comma";
    case '.': return "dot";
    case ';': return "semicolon";
    case ':': return "colon";
    case '\'': return "apostrophe";
    case '"': return "quote";
    case '`': return "backtick";
    case '~': return "tilde";
    case '@': return "at";
    case '\\': return "backslash";
    default: return "";
  }
}

void push_phrase(std::string_view phrase, std::vector<std::string>& words) {
  std::size_t i = 0;
  while (i < phrase.size()) {
    while (i < phrase.size() && phrase[i] == ' ') ++i;
    std::size_t j = i;
    while (j < phrase.size() && phrase[j] != ' ') ++j;
    if (j > i) words.push_back(std::string(phrase.substr(i, j - i)));
    i = j;
  }
}

// Characters of an opaque slice spoken one by one: alphabetic and digit runs
// stay words, symbols get their names, a backslash introducing a command name
// is dropped, whitespace separates.
void name_characters(std::string_view raw, std::vector<std::string>& words) {
  std::size_t i = 0;
  while (i < raw.size()) {
    const char c = raw[i];
    if (is_ascii_space(c)) {
      ++i;
      continue;
    }
    if (c == '\\') {
      if (i + 1 < raw.size() && is_ascii_alpha(raw[i + 1])) {
        ++i;
        continue;
      }
      words.push_back("backslash");
      ++i;
      continue;
    }
    if (is_ascii_alpha(c)) {
      std::size_t j = i;
      while (j < raw.size() && is_ascii_alpha(raw[j])) ++j;
      words.push_back(ascii_lowercase(raw.substr(i, j - i)));
      i = j;
      continue;
    }
    if (is_ascii_digit(c)) {
      std::size_t j = i;
      while (j < raw.size() && is_ascii_digit(raw[j])) ++j;
      words.push_back(std::string(raw.substr(i, j - i)));
      i = j;
      continue;
    }
    const std::string_view named = char_name(c);
    if (!named.empty()) {
      push_phrase(named, words);
      ++i;
      continue;
    }
    words.push_back("symbol");
    i += utf8_sequence_length(raw, i);
  }
}

bool is_text_wrapper_name(std::string_view name) {
  return name == "text" || name == "textrm" || name == "textbf" ||
         name == "textit" || name == "mathrm" || name == "mathbf" ||
         name == "mathit" || name == "mbox" || name == "operatorname";
}

const char* bin_op_key(BinOpKind op) {
  switch (op) {
    case BinOpKind::Plus: return "plus";
    case BinOpKind::Minus: return "minus";
    case BinOpKind::Times: return "times";
    case BinOpKind::Equals: return "equals";
    case BinOpKind::Less: return "lt";
    case BinOpKind::Greater: return "gt";
    case BinOpKind::LessEq: return "leq";
    case BinOpKind::GreaterEq: return "geq";
    case BinOpKind::NotEq: return "neq";
    case BinOpKind::Approx: return "approx";
  }
  return "plus";
}

const char* big_op_key(BigOpKind op) {
  switch (op) {
    case BigOpKind::Sum: return "sum";
    case BigOpKind::Product: return "prod";
    case BigOpKind::Integral: return "int";
    case BigOpKind::Limit: return "lim";
  }
  return "sum";
}

struct Walker {
  const VerbalizationRules& rules;
  std::vector<std::string> words;
  std::vector<SpokenText::FallbackSpan> spans;

  void say(std::string_view key, std::string_view fallback) {
    const std::string_view p = rules.phrase(key);
    push_phrase(p.empty() && !rules.has(key) ? fallback : p, words);
  }

  static bool compound(const MathNode& n) {
    return n.kind == AstKind::Sequence && n.children.size() > 1;
  }

  void operand(const MathNode& n) {
    if (rules.verbose_grouping && compound(n)) {
      say("word.quantity", "the quantity");
      walk(n);
      say("word.end_quantity", "end quantity");
    } else {
      walk(n);
    }
  }

  void walk(const MathNode& n) {
    switch (n.kind) {
      case AstKind::Sequence:
        for (const MathNode& c : n.children) walk(c);
        return;
      case AstKind::Sym:
        walk_sym(n.text);
        return;
      case AstKind::Num:
        words.push_back(n.text);
        return;
      case AstKind::BinOp: {
        const std::string key = std::string("rel.") + bin_op_key(n.op);
        say(key, bin_op_key(n.op));
        return;
      }
      case AstKind::Frac:
        operand(n.children[0]);
        say("word.over", "over");
        operand(n.children[1]);
        return;
      case AstKind::Power:
        operand(n.children[0]);
        say("word.power", "to the power of");
        operand(n.children[1]);
        return;
      case AstKind::Sub:
        operand(n.children[0]);
        say("word.sub", "sub");
        operand(n.children[1]);
        return;
      case AstKind::BigOp:
        walk_big_op(n);
        return;
      case AstKind::Func: {
        const std::string key = std::string("func.") + n.text;
        say(key, n.text);
        if (!n.children[0].is_empty()) {
          say("word.of", "of");
          operand(n.children[0]);
        }
        return;
      }
      case AstKind::Sqrt:
        if (n.has_degree && !n.children[0].is_empty()) {
          say("word.root_prefix", "the degree");
          walk(n.children[0]);
          say("word.root_suffix", "root of");
        } else {
          say("word.sqrt", "the square root of");
        }
        operand(n.children[1]);
        return;
      case AstKind::Group:
        walk_group(n);
        return;
      case AstKind::Opaque:
        walk_opaque(n.text);
        return;
    }
  }

  void walk_sym(const std::string& text) {
    if (text.empty()) return;
    if (text.size() == 1 &&
        (is_ascii_alpha(text[0]) || is_ascii_digit(text[0]))) {
      words.push_back(ascii_lowercase(text));
      return;
    }
    const std::string key = std::string("sym.") + text;
    if (rules.has(key)) {
      push_phrase(rules.phrase(key), words);
      return;
    }
    if (text.size() == 1) {
      const std::string_view named = char_name(text[0]);
      if (!named.empty()) {
        push_phrase(named, words);
        return;
      }
    }
    name_characters(text, words);
  }

  void walk_big_op(const MathNode& n) {
    const std::string key = std::string("bigop.") + big_op_key(n.big);
    say(key, big_op_key(n.big));
    const MathNode& lower = n.children[0];
    const MathNode& upper = n.children[1];
    const MathNode& body = n.children[2];
    const bool lo = n.has_lower && !lower.is_empty();
    const bool hi = n.has_upper && !upper.is_empty();
    if (n.big == BigOpKind::Limit) {
      if (lo) {
        say("word.as", "as");
        walk(lower);
      }
      if (hi) {
        say("word.to", "to");
        walk(upper);
      }
    } else if (lo && hi) {
      say("word.from", "from");
      walk(lower);
      say("word.to", "to");
      walk(upper);
    } else if (lo) {
      say("word.over", "over");
      walk(lower);
    } else if (hi) {
      say("word.to", "to");
      walk(upper);
    }
    if (!body.is_empty()) {
      say("word.of", "of");
      operand(body);
    }
  }

  // Fence phrase for one side of a Group; empty means silent.
  std::string fence_phrase(const std::string& fence, bool open) const {
    std::string_view f = fence;
    if (!f.empty() && f.front() == '\\') f.remove_prefix(1);
    if (f.empty() || f == ".") return "";
    auto p = [&](std::string_view key, std::string_view fb) {
      const std::string_view v = rules.phrase(key);
      return std::string(v.empty() && !rules.has(key) ? fb : v);
    };
    if (f == "(")
      return rules.voice_fences ? p("fence.open_paren", "open paren") : "";
    if (f == ")")
      return rules.voice_fences ? p("fence.close_paren", "close paren") : "";
    if (f == "[") return p("fence.open_bracket", "open bracket");
    if (f == "]") return p("fence.close_bracket", "close bracket");
    if (f == "{" || f == "lbrace")
      return p("fence.open_brace", "open brace");
    if (f == "}" || f == "rbrace")
      return p("fence.close_brace", "close brace");
    if (f == "|" || f == "vert" || f == "lvert" || f == "rvert")
      return p("fence.bar", "bar");
    if (f == "Vert") return p("fence.double_bar", "double bar");
    if (f == "<" || f == "langle")
      return p("fence.open_angle", "open angle bracket");
    if (f == ">" || f == "rangle")
      return p("fence.close_angle", "close angle bracket");
    if (f == "lfloor") return p("fence.left_floor", "left floor");
    if (f == "rfloor") return p("fence.right_floor", "right floor");
    if (f == "lceil") return p("fence.left_ceiling", "left ceiling");
    if (f == "rceil") return p("fence.right_ceiling", "right ceiling");
    std::vector<std::string> named;
    name_characters(f, named);
    std::string joined;
    for (const std::string& w : named) {
      if (!joined.empty()) joined += ' ';
      joined += w;
    }
    (void)open;
    return joined;
  }

  void walk_group(const MathNode& n) {
    const std::string open_words = fence_phrase(n.fence_open, true);
    const std::string close_words = fence_phrase(n.fence_close, false);
    const bool silent = open_words.empty() && close_words.empty();
    push_phrase(open_words, words);
    if (silent && rules.verbose_grouping && compound(n.children[0])) {
      say("word.quantity", "the quantity");
      walk(n.children[0]);
      say("word.end_quantity", "end quantity");
    } else {
      walk(n.children[0]);
    }
    push_phrase(close_words, words);
  }

  void walk_opaque(const std::string& raw) {
    const std::size_t begin = words.size();
    bool handled = false;
    if (!raw.empty() && raw.front() == '\\') {
      std::size_t j = 1;
      while (j < raw.size() && is_ascii_alpha(raw[j])) ++j;
      if (is_text_wrapper_name(std::string_view(raw).substr(1, j - 1)) &&
          j < raw.size() && raw[j] == '{' && raw.back() == '}') {
        name_characters(std::string_view(raw).substr(j + 1,
                                                     raw.size() - j - 2),
                        words);
        handled = true;
      }
    }
    if (!handled) name_characters(raw, words);
    if (words.size() > begin) {
      spans.push_back({begin, words.size(), raw});
    }
  }
};

SpokenText finish(Walker&& w) {
  SpokenText out;
  out.text = join_words(w.words);
  out.fallback_spans = std::move(w.spans);
  return out;
}

}  // namespace

VerbalizationRules VerbalizationRules::defaults() {
  static const std::unordered_map<std::string, std::string> table = [] {
    std::unordered_map<std::string, std::string> m;
    parse_rules_text(kRulesText, "builtin rules", m);
    return m;
  }();
  VerbalizationRules rules;
  rules.entries = table;
  return rules;
}

void VerbalizationRules::load_overrides(const std::string& path) {
  const std::string text = read_text_file(path);
  std::unordered_map<std::string, std::string> parsed;
  parse_rules_text(text, path, parsed);
  for (auto& [key, value] : parsed) entries[key] = std::move(value);
}

std::string_view VerbalizationRules::phrase(std::string_view key) const {
  const auto it = entries.find(std::string(key));
  return it == entries.end() ? std::string_view() : std::string_view(it->second);
}

bool VerbalizationRules::has(std::string_view key) const {
  return entries.count(std::string(key)) != 0;
}

std::string_view default_rules_text() { return kRulesText; }

SpokenText verbalize(const MathNode& ast, const VerbalizationRules& rules) {
  Walker w{rules, {}, {}};
  w.walk(ast);
  return finish(std::move(w));
}

SpokenText verbalize_latex(std::string_view latex,
                           const VerbalizationRules& rules) {
  SpokenText spoken = verbalize(parse_latex(latex), rules);
  if (!spoken.text.empty()) return spoken;
  const bool has_content =
      trim(latex).size() > 0;
  if (!has_content) return spoken;
  // Rules produced nothing for a visible formula; never skip it.
  Walker w{rules, {}, {}};
  name_characters(latex, w.words);
  if (w.words.empty()) w.words.push_back("formula");
  w.spans.push_back({0, w.words.size(), std::string(latex)});
  return finish(std::move(w));
}

}  // namespace mathreader
