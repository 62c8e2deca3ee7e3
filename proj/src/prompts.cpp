#include "taforge/prompts.hpp"

#include "taforge/csv.hpp"
#include "taforge/errors.hpp"
#include "taforge/hash.hpp"

namespace taforge::prompts {

namespace {

constexpr std::string_view kInitialCoding =
    "Identify up to {max_codes} most relevant themes in the text, provide a name for each theme "
    "in no more than 3 words,\n"
    "4 lines meaningful and dense description of the theme and a quote from the respondent for "
    "each theme no longer than 7 lines\n"
    "\n"
    "Format the response as a json file keeping names, descriptions and quotes together in the "
    "json, and keep them\n"
    "together in 'Themes'.\n"
    "\n"
    "```{text}```";

constexpr std::string_view kDedup =
    "Determine which items in the following list of topics are entirely unique\n"
    "\n"
    "Format the response as a json, grouped in 'items' and separated in keys 'topic' and "
    "'indices'\n"
    "\n"
    "List of topics: {topics}";

constexpr std::string_view kTheming =
    "Determine how all the topics in the following list of topics can be grouped together, and "
    "topics can also be in more than one group.\n"
    "\n"
    "Group all the topics numbers only and provide a name and a description for each group\n"
    "Create {n} significant groups\n"
    "\n"
    "Display the full list\n"
    "\n"
    "List of topics: {topics}";

constexpr std::string_view kNaming =
    "Using all the topics in the list, give a summary (in 2 sentences) and a name (5 words max) "
    "for the summary\n"
    "List of topics: {topics}";

}  // namespace

std::string_view initial_coding_template() { return kInitialCoding; }
std::string_view dedup_template() { return kDedup; }
std::string_view theming_template() { return kTheming; }
std::string_view naming_template() { return kNaming; }

TemplateSet TemplateSet::builtin() {
  return {std::string(kInitialCoding), std::string(kDedup), std::string(kTheming),
          std::string(kNaming)};
}

TemplateSet TemplateSet::from_directory(const std::string& dir) {
  TemplateSet set;
  set.initial_coding = csv::read_file(dir + "/initial_coding.txt");
  set.dedup = csv::read_file(dir + "/dedup.txt");
  set.theming = csv::read_file(dir + "/theming.txt");
  set.naming = csv::read_file(dir + "/naming.txt");
  return set;
}

std::string TemplateSet::hash_of(std::string_view which) const {
  if (which == "initial_coding") return hash_hex(initial_coding);
  if (which == "dedup") return hash_hex(dedup);
  if (which == "theming") return hash_hex(theming);
  if (which == "naming") return hash_hex(naming);
  throw ValidationError("unknown prompt template: " + std::string(which));
}

std::string render(std::string_view tmpl,
                   const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out(tmpl);
  for (const auto& [key, value] : values) {
    const std::string needle = "{" + key + "}";
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return out;
}

std::string dedup_topic_line(std::string_view name, int index, std::string_view description) {
  std::string line;
  line += "'";
  line += name;
  line += "': '";
  line += std::to_string(index);
  line += "' '";
  line += description;
  line += "'";
  return line;
}

std::string theming_topic_line(std::string_view name, std::string_view description) {
  std::string line;
  line += "'";
  line += name;
  line += "': '";
  line += description;
  line += "'";
  return line;
}

std::string naming_topic_line(std::string_view name, std::string_view description,
                              std::string_view quote) {
  std::string line = theming_topic_line(name, description);
  line += " '";
  line += quote;
  line += "'";
  return line;
}

std::string join_topics(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += ", ";
    out += lines[i];
  }
  return out;
}

}  // namespace taforge::prompts
