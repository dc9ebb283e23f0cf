#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "websuite/taxonomy.hpp"

namespace websuite {

enum class Verb { kClick, kType, kSelect, kHover, kDrag, kNavigate, kSubmit, kStop };

std::string_view verb_name(Verb verb);
std::optional<Verb> verb_from_name(std::string_view name);

struct ActionCommand {
  Verb verb = Verb::kStop;
  std::string target;   // element_id; empty for navigate / stop
  std::string payload;  // typed text, option, drag value or path

  bool operator==(const ActionCommand&) const = default;
};

/// Throws Error{kIncompatibleVerb} when target/payload presence does not fit
/// the verb.
void validate_command_shape(const ActionCommand& cmd);

struct ElementManifest {
  std::string element_id;
  InteractionRef kind;
  std::string label;
  std::string state;
  std::vector<std::string> options;  // select choices, slider "min".."max"
};

/// Whether `verb` is a meaningful action on an element of `kind`.
bool verb_applies(Verb verb, const InteractionRef& kind);

struct PageDoc {
  std::string path;
  std::string title;
  std::string body_html;
  std::vector<ElementManifest> elements;

  const ElementManifest* find(std::string_view element_id) const;
};

/// What the checker sees once a trial is over.
struct FinalState {
  std::string path;
  std::map<std::string, std::string> element_states;
  std::optional<std::map<std::string, std::string>> submitted;
};

std::string html_escape(std::string_view text);

/// Emits body HTML and the element manifest together so the two cannot
/// drift apart.
class PageBuilder {
 public:
  PageBuilder(std::string path, std::string title);

  PageBuilder& heading(std::string_view text, int level = 2);
  PageBuilder& paragraph(std::string_view text);
  PageBuilder& raw(std::string_view html);
  PageBuilder& element(ElementManifest element);

  PageDoc build() &&;

 private:
  PageDoc doc_;
  std::string html_;
};

nlohmann::json to_json(const ElementManifest& element);
nlohmann::json to_json(const PageDoc& page);
nlohmann::json to_json(const ActionCommand& cmd);
PageDoc page_from_json(const nlohmann::json& doc);
/// Throws Error{kAgentError} on a malformed command document.
ActionCommand command_from_json(const nlohmann::json& doc);

}  // namespace websuite
