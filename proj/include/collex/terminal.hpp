#pragma once

#include <iosfwd>

#include "collex/exploration.hpp"

namespace collex {

/// Asks a person on a terminal. Replies to a query:
///
///   y                       accept
///   n <name> +a +b -c       refute with a named partial example
///   ?                       no opinion (the query is deferred)
///
/// With a consortium the person answers for each selected expert in turn,
/// seeing only that expert's block, and is asked about combined names.
/// Bad replies are reported and asked again; end of input is a ProtocolError.
class TerminalAnswerer : public Answerer {
 public:
  TerminalAnswerer(std::istream& in, std::ostream& out, UniversePtr universe);
  TerminalAnswerer(std::istream& in, std::ostream& out, const Consortium& consortium);

  ExpertAnswer ask(const Implication& f) override;
  std::size_t participants() const override;
  std::optional<PartialExample> describe(std::size_t participant, std::string_view name) override;

 private:
  ExpertAnswer prompt(const std::string& who, const Implication& f, const AttributeSet& block);
  std::string read_line();
  PartialExample parse_example(const std::string& name, const std::vector<std::string>& tokens,
                               const AttributeSet& block) const;

  std::istream& in_;
  std::ostream& out_;
  UniversePtr universe_;
  const Consortium* consortium_ = nullptr;
  std::size_t asked_ = 0;
};

}  // namespace collex
