#include "collex/terminal.hpp"

#include <istream>
#include <ostream>

#include "collex/errors.hpp"
#include "collex/text_io.hpp"

namespace collex {

TerminalAnswerer::TerminalAnswerer(std::istream& in, std::ostream& out, UniversePtr universe)
    : in_(in), out_(out), universe_(std::move(universe)) {}

TerminalAnswerer::TerminalAnswerer(std::istream& in, std::ostream& out, const Consortium& consortium)
    : in_(in), out_(out), universe_(consortium.universe()), consortium_(&consortium) {}

std::size_t TerminalAnswerer::participants() const { return consortium_ ? consortium_->experts().size() : 0; }

std::string TerminalAnswerer::read_line() {
  std::string line;
  if (!std::getline(in_, line)) throw ProtocolError("input ended before the exploration finished");
  return line;
}

PartialExample TerminalAnswerer::parse_example(const std::string& name, const std::vector<std::string>& tokens,
                                               const AttributeSet& block) const {
  const auto& m = *universe_;
  PartialExample e{name, AttributeSet(m.size()), AttributeSet(m.size())};
  for (const auto& t : tokens) {
    if (t.size() < 2 || (t[0] != '+' && t[0] != '-')) throw ProtocolError("expected +attribute or -attribute, got '" + t + "'");
    const auto i = m.index_of(t.substr(1));
    if (!block.contains(i)) throw ProtocolError("'" + t.substr(1) + "' is outside your attributes");
    (t[0] == '+' ? e.present : e.absent).insert(i);
  }
  e.validate();
  return e;
}

ExpertAnswer TerminalAnswerer::prompt(const std::string& who, const Implication& f, const AttributeSet& block) {
  const auto shown = restrict_query(f, block).normalized();
  for (;;) {
    out_ << (who.empty() ? "" : "[" + who + "] ") << "query " << asked_ << ": "
         << format_implication(*universe_, shown) << (consortium_ ? "  (y | n <name> +a -b) > " : "  (y | n <name> +a -b | ?) > ") << std::flush;
    try {
      const auto tokens = tokenize(read_line());
      if (tokens.empty()) throw ProtocolError("empty reply");
      const auto& head = tokens[0];
      if (head == "y" || head == "yes") return ExpertAnswer::accept();
      if (head == "?" && !consortium_) return ExpertAnswer::null();
      if (head != "n" && head != "no") throw ProtocolError("unknown reply '" + head + "'");
      if (tokens.size() < 2) throw ProtocolError("a counterexample needs a name");
      auto e = parse_example(tokens[1], {tokens.begin() + 2, tokens.end()}, block);
      if (!refutes(e, shown)) throw ProtocolError("that example does not refute the query");
      return ExpertAnswer::refute(std::move(e));
    } catch (const Error& e) {
      if (in_.eof()) throw;
      out_ << "error: " << e.what() << '\n';
    }
  }
}

ExpertAnswer TerminalAnswerer::ask(const Implication& f) {
  ++asked_;
  if (!consortium_) return prompt("", f, AttributeSet::full(universe_->size()));
  const auto& c = *consortium_;
  std::vector<std::size_t> selected;
  try {
    selected = select_experts(c, f);
  } catch (const QualificationError&) {
    out_ << "query " << asked_ << ": " << format_implication(*universe_, f.normalized()) << "  (nobody qualified)\n";
    return c.accept_on_null ? ExpertAnswer::accept() : ExpertAnswer::null();
  }
  std::vector<ExpertAnswer> answers;
  for (auto i : selected) {
    answers.push_back(prompt(c.expert(i).id, f, c.domain().block(i)));
    if (answers.back().verdict == Verdict::Refute) break;
  }
  return aggregate_answers(c, f, selected, answers);
}

std::optional<PartialExample> TerminalAnswerer::describe(std::size_t participant, std::string_view name) {
  if (!consortium_) return std::nullopt;
  const auto& block = consortium_->domain().block(participant);
  for (;;) {
    out_ << "[" << consortium_->expert(participant).id << "] do you know '" << name
         << "'? (n | +a -b ...) > " << std::flush;
    try {
      const auto tokens = tokenize(read_line());
      if (tokens.empty() || tokens[0] == "n" || tokens[0] == "no") return std::nullopt;
      return parse_example(std::string(name), tokens, block);
    } catch (const Error& e) {
      if (in_.eof()) throw;
      out_ << "error: " << e.what() << '\n';
    }
  }
}

}  // namespace collex
