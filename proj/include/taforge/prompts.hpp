#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace taforge::prompts {

// Built-in templates. A template directory configured on the run overrides
// these; either way the rendered template's source hash goes into the run
// manifest.
std::string_view initial_coding_template();
std::string_view dedup_template();
std::string_view theming_template();
std::string_view naming_template();

struct TemplateSet {
  std::string initial_coding;
  std::string dedup;
  std::string theming;
  std::string naming;

  static TemplateSet builtin();
  // Reads initial_coding.txt, dedup.txt, theming.txt, naming.txt from dir.
  static TemplateSet from_directory(const std::string& dir);

  std::string hash_of(std::string_view which) const;  // hash of one template's text
};

// Replaces every "{key}" occurrence.
std::string render(std::string_view tmpl,
                   const std::vector<std::pair<std::string, std::string>>& values);

// Topic line formats used by the dedup / theming / naming prompts.
std::string dedup_topic_line(std::string_view name, int index, std::string_view description);
std::string theming_topic_line(std::string_view name, std::string_view description);
std::string naming_topic_line(std::string_view name, std::string_view description,
                              std::string_view quote);
std::string join_topics(const std::vector<std::string>& lines);

}  // namespace taforge::prompts
