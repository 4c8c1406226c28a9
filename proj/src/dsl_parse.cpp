#include <cctype>
#include <charconv>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "tmkit/dsl.hpp"

namespace tmkit {

std::string ParseError::message() const {
  return span.file + ":" + std::to_string(span.line) + ":" +
         std::to_string(span.column) + ": expected " + expected + ", found " +
         found;
}

const Scenario* Document::find_scenario(const std::string& name) const {
  for (const auto& scenario : scenarios)
    if (scenario.name == name) return &scenario;
  return nullptr;
}

namespace {

enum class TokenType { Ident, String, Number, Symbol, End };

struct Token {
  TokenType type = TokenType::End;
  std::string text;
  SourceSpan span;
  double number = 0;
  bool integral = false;
  std::int64_t int_value = 0;
};

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file)
      : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space();
      Token token = next();
      bool end = token.type == TokenType::End;
      tokens.push_back(std::move(token));
      if (end) break;
    }
    return tokens;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      line_++;
      column_ = 1;
    } else {
      column_++;
    }
    pos_++;
  }

  SourceSpan here(int length) const { return {file_, line_, column_, length}; }

  Token next() {
    if (pos_ >= text_.size()) return {TokenType::End, "", here(0)};
    char c = text_[pos_];
    SourceSpan span = here(1);

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ident += text_[pos_];
        advance();
      }
      span.length = static_cast<int>(ident.size());
      return {TokenType::Ident, ident, span};
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      bool is_float = false;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.')) {
        // A '.' not followed by a digit belongs to a path, not a number.
        if (text_[pos_] == '.') {
          if (pos_ + 1 >= text_.size() ||
              !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))
            break;
          is_float = true;
        }
        digits += text_[pos_];
        advance();
      }
      span.length = static_cast<int>(digits.size());
      Token token{TokenType::Number, digits, span};
      token.number = std::stod(digits);
      token.integral = !is_float;
      if (token.integral) token.int_value = std::stoll(digits);
      return token;
    }

    if (c == '"') {
      advance();
      std::string value;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        value += text_[pos_];
        advance();
      }
      if (pos_ < text_.size()) advance();  // closing quote
      span.length = static_cast<int>(value.size()) + 2;
      return {TokenType::String, value, span};
    }

    auto symbol = [&](std::string_view s) {
      for (char ch : s) {
        (void)ch;
        advance();
      }
      span.length = static_cast<int>(s.size());
      return Token{TokenType::Symbol, std::string(s), span};
    };

    if (text_.compare(pos_, 3, "-->") == 0) return symbol("-->");
    if (text_.compare(pos_, 2, "->") == 0) return symbol("->");
    if (text_.compare(pos_, 2, "<=") == 0) return symbol("<=");
    if (text_.compare(pos_, 2, ">=") == 0) return symbol(">=");
    if (text_.compare(pos_, 2, "==") == 0) return symbol("==");
    switch (c) {
      case '{': case '}': case '=': case ',': case '@':
      case '<': case '>': case '-': case '.':
        return symbol(std::string_view(&text_[pos_], 1));
      default:
        break;
    }
    std::string bad(1, c);
    advance();
    return {TokenType::Symbol, bad, span};
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

constexpr int kMaxErrors = 20;

class Parser {
 public:
  Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ParseResult run() {
    parse_document();
    ParseResult result;
    result.errors = errors_;
    if (!errors_.empty()) return result;

    BuildResult built = build_model(decls_);
    result.build_errors = built.errors;
    result.doc.model = std::move(built.model);
    if (!regions_.empty()) result.doc.partition = ChangePartition{regions_};
    result.doc.events = events_;
    result.doc.has_behavior = has_behavior_;
    result.doc.repeats = repeats_;
    result.doc.branches = branches_;
    result.doc.behavior_edges = behavior_edges_;
    result.doc.constraints = constraints_;
    result.doc.scenarios = scenarios_;
    return result;
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  Token take() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) pos_++;
    return t;
  }

  bool at_ident(std::string_view word) const {
    return peek().type == TokenType::Ident && peek().text == word;
  }

  bool at_symbol(std::string_view sym) const {
    return peek().type == TokenType::Symbol && peek().text == sym;
  }

  bool eat_ident(std::string_view word) {
    if (!at_ident(word)) return false;
    take();
    return true;
  }

  bool eat_symbol(std::string_view sym) {
    if (!at_symbol(sym)) return false;
    take();
    return true;
  }

  void error(const std::string& expected) {
    if (static_cast<int>(errors_.size()) < kMaxErrors) {
      std::string found = peek().type == TokenType::End
                              ? "end of input"
                              : "'" + peek().text + "'";
      errors_.push_back({peek().span, expected, found});
    }
    recover();
  }

  // Skip to the next plausible declaration start.
  void recover() {
    static const std::set<std::string> sync = {
        "model", "thimac", "flow",     "trigger", "region",
        "event", "behavior", "wap",    "scenario"};
    while (peek().type != TokenType::End) {
      if (peek().type == TokenType::Ident && sync.count(peek().text)) return;
      if (at_symbol("}")) {
        take();
        return;
      }
      take();
    }
  }

  bool expect_symbol(std::string_view sym) {
    if (eat_symbol(sym)) return true;
    error("'" + std::string(sym) + "'");
    return false;
  }

  std::optional<std::string> expect_ident(const std::string& what) {
    if (peek().type == TokenType::Ident &&
        !stage_kind_from(peek().text)) {
      return take().text;
    }
    error(what);
    return std::nullopt;
  }

  std::optional<std::int64_t> expect_int(const std::string& what) {
    if (peek().type == TokenType::Number && peek().integral)
      return take().int_value;
    error(what);
    return std::nullopt;
  }

  std::optional<TimeValue> expect_time(const std::string& what) {
    auto magnitude = expect_int(what);
    if (!magnitude) return std::nullopt;
    if (peek().type == TokenType::Ident) {
      if (auto unit = time_unit_from(peek().text)) {
        take();
        return TimeValue::of(*magnitude, *unit);
      }
    }
    error("time unit (us, ms or s)");
    return std::nullopt;
  }

  // path := IDENT ("." IDENT)* "." stagekind
  std::optional<StageId> expect_stage_path() {
    std::vector<std::string> segments;
    while (true) {
      if (peek().type != TokenType::Ident) {
        error("stage path");
        return std::nullopt;
      }
      segments.push_back(take().text);
      if (!eat_symbol(".")) break;
    }
    if (segments.size() < 2 || !stage_kind_from(segments.back())) {
      error("stage path ending in a stage kind");
      return std::nullopt;
    }
    std::string path = segments[0];
    for (std::size_t i = 1; i < segments.size(); ++i) path += "." + segments[i];
    return path;
  }

  void parse_document() {
    if (!eat_ident("model")) {
      error("'model'");
      if (!at_ident("model")) return;
      take();
    }
    if (peek().type == TokenType::String) {
      decls_.name = take().text;
    } else {
      error("model name string");
    }
    while (peek().type != TokenType::End &&
           static_cast<int>(errors_.size()) < kMaxErrors) {
      parse_item();
    }
  }

  void parse_item() {
    if (eat_ident("thimac")) return parse_thimac({});
    if (eat_ident("flow")) return parse_flow();
    if (eat_ident("trigger")) return parse_trigger();
    if (eat_ident("region")) return parse_region();
    if (eat_ident("event")) return parse_event();
    if (eat_ident("behavior")) return parse_behavior();
    if (eat_ident("wap")) return parse_wap();
    if (eat_ident("scenario")) return parse_scenario();
    error("a declaration (thimac, flow, trigger, region, event, behavior, "
          "wap or scenario)");
  }

  void parse_thimac(const std::optional<ThimacId>& parent) {
    auto name = expect_ident("thimac name");
    if (!name) return;
    ThimacId id = parent ? *parent + "." + *name : *name;
    decls_.thimacs.push_back({id, *name, parent});
    if (!expect_symbol("{")) return;
    std::set<StageKind> declared;
    while (!eat_symbol("}")) {
      if (peek().type == TokenType::End) {
        error("'}'");
        return;
      }
      if (eat_ident("thimac")) {
        parse_thimac(id);
        continue;
      }
      if (peek().type == TokenType::Ident) {
        if (auto kind = stage_kind_from(peek().text)) {
          take();
          StageDecl stage;
          stage.kind = *kind;
          stage.owner = id;
          stage.id = id + "." + std::string(to_string(*kind));
          if (peek().type == TokenType::String) stage.label = take().text;
          if (eat_symbol("@")) {
            if (auto anchor = expect_int("anchor number"))
              stage.anchor = static_cast<int>(*anchor);
          }
          if (!declared.insert(*kind).second) {
            error("at most one '" + std::string(to_string(*kind)) +
                  "' stage per thimac");
            continue;
          }
          decls_.stages.push_back(stage);
          continue;
        }
      }
      error("a stage kind or nested thimac");
      return;
    }
  }

  void parse_flow() {
    auto from = expect_stage_path();
    if (!from) return;
    if (!at_symbol("->")) {
      error("'->'");
      return;
    }
    while (eat_symbol("->")) {
      auto to = expect_stage_path();
      if (!to) return;
      decls_.flows.push_back({*from, *to});
      from = to;
    }
  }

  void parse_trigger() {
    auto from = expect_stage_path();
    if (!from) return;
    if (!expect_symbol("-->")) return;
    auto to = expect_stage_path();
    if (!to) return;
    std::optional<std::string> join;
    if (eat_ident("join")) {
      join = expect_ident("join group name");
      if (!join) return;
    }
    decls_.triggers.push_back({*from, *to, join});
  }

  void parse_region() {
    auto id = expect_ident("region name");
    if (!id) return;
    if (!expect_symbol("{")) return;
    Region region;
    region.id = *id;
    while (true) {
      auto path = expect_stage_path();
      if (!path) return;
      region.stages.insert(*path);
      if (!eat_symbol(",")) break;
    }
    if (!expect_symbol("}")) return;
    regions_.push_back(std::move(region));
  }

  void parse_event() {
    auto id = expect_ident("event name");
    if (!id) return;
    if (!eat_ident("region")) {
      error("'region'");
      return;
    }
    auto region = expect_ident("region name");
    if (!region) return;
    EventSpec spec{*id, *region, std::nullopt};
    if (eat_ident("duration")) {
      spec.duration = expect_time("duration");
      if (!spec.duration) return;
    }
    events_.push_back(std::move(spec));
  }

  void parse_behavior() {
    has_behavior_ = true;
    if (!expect_symbol("{")) return;
    while (!eat_symbol("}")) {
      if (peek().type == TokenType::End) {
        error("'}'");
        return;
      }
      if (eat_ident("repeat")) {
        if (auto id = expect_ident("event name")) repeats_.insert(*id);
        continue;
      }
      if (eat_ident("branch")) {
        parse_branch();
        continue;
      }
      auto from = expect_ident("event name, 'repeat' or 'branch'");
      if (!from) return;
      if (!expect_symbol("->")) return;
      auto to = expect_ident("event name");
      if (!to) return;
      behavior_edges_.push_back({*from, *to});
    }
  }

  void parse_branch() {
    auto at = expect_ident("event name");
    if (!at) return;
    Branch branch;
    branch.at = *at;
    branch.else_skip = false;
    if (!expect_symbol("{")) return;
    while (true) {
      if (eat_ident("when")) {
        auto guard = parse_guard();
        if (!guard) return;
        if (!expect_symbol("->")) return;
        auto to = expect_ident("event name");
        if (!to) return;
        branch.arms.push_back({*guard, *to});
        if (eat_symbol(",")) continue;
      }
      break;
    }
    if (eat_ident("else")) {
      if (!expect_symbol("->")) return;
      if (!eat_ident("skip")) {
        error("'skip'");
        return;
      }
      branch.else_skip = true;
    }
    if (!expect_symbol("}")) return;
    if (branch.arms.empty()) {
      error("at least one 'when' arm");
      return;
    }
    branches_.push_back(std::move(branch));
  }

  std::optional<GuardExpr> parse_guard() {
    GuardExpr guard;
    while (true) {
      auto name = expect_ident("measurement name");
      if (!name) return std::nullopt;
      CompareOp op;
      if (eat_symbol("<=")) op = CompareOp::Le;
      else if (eat_symbol(">=")) op = CompareOp::Ge;
      else if (eat_symbol("==")) op = CompareOp::Eq;
      else if (eat_symbol("<")) op = CompareOp::Lt;
      else if (eat_symbol(">")) op = CompareOp::Gt;
      else {
        error("comparison operator");
        return std::nullopt;
      }
      if (peek().type != TokenType::Number) {
        error("threshold number");
        return std::nullopt;
      }
      guard.terms.push_back({*name, op, take().number});
      if (!eat_ident("and")) break;
    }
    return guard;
  }

  std::optional<std::pair<std::string, TimePoint>> expect_event_point() {
    auto event = expect_ident("event name");
    if (!event) return std::nullopt;
    if (!expect_symbol(".")) return std::nullopt;
    TimePoint point;
    if (eat_ident("start")) point = TimePoint::Start;
    else if (eat_ident("finish")) point = TimePoint::Finish;
    else {
      error("'start' or 'finish'");
      return std::nullopt;
    }
    return std::make_pair(*event, point);
  }

  // wap LATER.point - EARLIER.point <= INT UNIT [warn IDENT]
  void parse_wap() {
    auto later = expect_event_point();
    if (!later) return;
    if (!expect_symbol("-")) return;
    auto earlier = expect_event_point();
    if (!earlier) return;
    if (!expect_symbol("<=")) return;
    auto bound = expect_time("separation bound");
    if (!bound) return;
    WapConstraint constraint;
    constraint.later_event = later->first;
    constraint.later_point = later->second;
    constraint.earlier_event = earlier->first;
    constraint.earlier_point = earlier->second;
    constraint.max_separation = *bound;
    if (eat_ident("warn")) {
      auto id = expect_ident("warning name");
      if (!id) return;
      constraint.warning_id = *id;
    }
    if (constraint.max_separation.micros <= 0) {
      error("positive separation bound");
      return;
    }
    constraints_.push_back(std::move(constraint));
  }

  void parse_scenario() {
    auto name = expect_ident("scenario name");
    if (!name) return;
    Scenario scenario;
    scenario.name = *name;
    if (!expect_symbol("{")) return;
    while (!eat_symbol("}")) {
      if (!eat_ident("tick")) {
        error("'tick' or '}'");
        return;
      }
      auto time = expect_time("tick time");
      if (!time) return;
      ScenarioTick tick;
      tick.time = *time;
      if (!expect_symbol("{")) return;
      while (!eat_symbol("}")) {
        if (eat_ident("delay")) {
          auto event = expect_ident("event name");
          if (!event) return;
          auto delay = expect_time("delay");
          if (!delay) return;
          tick.processing_delays[*event] = *delay;
          continue;
        }
        auto measurement = expect_ident("measurement name or 'delay'");
        if (!measurement) return;
        if (!expect_symbol("=")) return;
        if (peek().type != TokenType::Number) {
          error("measurement value");
          return;
        }
        tick.measurements[*measurement] = take().number;
      }
      if (!scenario.ticks.empty() && tick.time <= scenario.ticks.back().time) {
        error("strictly increasing tick times");
        return;
      }
      if (!scenario.ticks.empty()) {
        auto keys = [](const ScenarioTick& t) {
          std::vector<std::string> out;
          for (const auto& [k, _] : t.measurements) out.push_back(k);
          return out;
        };
        if (keys(tick) != keys(scenario.ticks.front())) {
          error("the same measurement names on every tick");
          return;
        }
      }
      scenario.ticks.push_back(std::move(tick));
    }
    scenarios_.push_back(std::move(scenario));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<ParseError> errors_;

  ModelDecls decls_;
  std::vector<Region> regions_;
  std::vector<EventSpec> events_;
  bool has_behavior_ = false;
  std::set<std::string> repeats_;
  std::vector<Branch> branches_;
  std::vector<std::pair<std::string, std::string>> behavior_edges_;
  std::vector<WapConstraint> constraints_;
  std::vector<Scenario> scenarios_;
};

}  // namespace

ParseResult parse(std::string_view text, const std::string& file) {
  Lexer lexer(text, file);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace tmkit
