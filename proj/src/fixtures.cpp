#include "taforge/fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "taforge/codegen.hpp"
#include "taforge/corpus.hpp"
#include "taforge/csv.hpp"
#include "taforge/errors.hpp"
#include "taforge/prompts.hpp"
#include "taforge/reducer.hpp"
#include "taforge/reviewer.hpp"
#include "taforge/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace taforge::fixtures {

void ScriptedBackend::add(gateway::Purpose purpose, std::string key_substring,
                          std::string content, std::optional<double> temperature) {
  std::lock_guard lock(mutex_);
  entries_.push_back({purpose, temperature, std::move(key_substring), std::move(content), false});
}

std::string ScriptedBackend::send(const gateway::ChatRequest& req, const std::string& fp) {
  if (req.messages.empty()) throw BackendError("scripted backend: empty request");
  const std::string& content = req.messages.back().content;
  std::lock_guard lock(mutex_);
  for (auto& entry : entries_) {
    if (entry.used || entry.purpose != req.purpose) continue;
    if (entry.temperature && *entry.temperature != req.config.temperature) continue;
    if (!entry.key.empty() && content.find(entry.key) == std::string::npos) continue;
    entry.used = true;
    log_.push_back({req.purpose, req.config.temperature, fp, entry.content});
    return entry.content;
  }
  throw BackendError("scripted backend: no entry for purpose " +
                     std::string(gateway::purpose_name(req.purpose)) + ", prompt starts: " +
                     content.substr(0, 80));
}

std::vector<ScriptedBackend::Exchange> ScriptedBackend::log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

DatasetShape gaming_shape() {
  DatasetShape s;
  s.tag = "gaming";
  s.docs = 14;
  s.paragraphs_per_doc = 20;  // 4 chunks of 5 paragraphs per document
  s.expected_chunks = 56;
  s.raw_codes = 161;
  s.reduced_codes = 89;
  s.theme_count = 11;
  s.sweep_temperature = 1.0;
  return s;
}

DatasetShape teaching_shape() {
  DatasetShape s;
  s.tag = "teaching";
  s.docs = 7;
  s.paragraphs_per_doc = 25;
  s.expected_chunks = 35;
  s.raw_codes = 101;
  s.reduced_codes = 63;
  s.theme_count = 7;
  s.sweep_temperature = 0.5;
  return s;
}

DatasetShape interviews_shape() {
  DatasetShape s;
  s.tag = "interviews";
  s.docs = 3;
  s.paragraphs_per_doc = 10;
  s.expected_chunks = 6;
  s.raw_codes = 18;
  s.reduced_codes = 12;
  s.theme_count = 3;
  s.sweep_temperature = 1.0;
  return s;
}

namespace {

std::string pad2(int n) {
  std::string s = std::to_string(n);
  return s.size() < 2 ? "0" + s : s;
}

std::string marker(const DatasetShape& shape, int doc, int para) {
  return "<" + shape.tag + "-" + pad2(doc) + "-" + pad2(para) + ">";
}

const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "the",     "respondent", "talks",   "about",   "daily",  "practice", "and",
      "shares",  "an",         "example", "from",    "recent", "work",     "with",
      "others",  "before",     "turning", "back",    "toward", "a",        "new",
      "question"};
  return words;
}

std::string make_paragraph(const DatasetShape& shape, int doc, int para) {
  std::string out = marker(shape, doc, para);
  const auto& filler = filler_words();
  for (int w = 1; w < shape.words_per_paragraph; ++w) {
    out += ' ';
    out += filler[static_cast<std::size_t>(w) % filler.size()];
  }
  return out;
}

// The pair layout behind the dedup script: raw code j merges with raw code
// reduced+j for j below (raw - reduced); the remaining reduced indices stay
// singletons. Reduced index j therefore keeps raw code j as representative.
int pair_count(const DatasetShape& shape) { return shape.raw_codes - shape.reduced_codes; }

std::vector<int> round_robin_members(int total, int groups, int which) {
  std::vector<int> out;
  for (int i = which; i < total; i += groups) out.push_back(i);
  return out;
}

themer::ThemeSet make_set(const std::vector<std::pair<std::string, std::string>>& entries,
                          int reduced_codes, double temperature, int run_ordinal) {
  themer::ThemeSet set;
  set.n_requested = static_cast<int>(entries.size());
  set.temperature = temperature;
  set.codebook_stage = "reduced";
  set.run_ordinal = run_ordinal;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    themer::Theme t;
    t.theme_id = static_cast<int>(i);
    t.name = entries[i].first;
    t.description = entries[i].second;
    t.member_indices = round_robin_members(reduced_codes, static_cast<int>(entries.size()),
                                           static_cast<int>(i));
    set.themes.push_back(std::move(t));
  }
  return set;
}

using Catalogue = std::vector<std::pair<std::string, std::string>>;

const Catalogue& gaming_baseline() {
  static const Catalogue c = {
      {"Gaming and Education",
       "This group includes topics related to the use of video games for education and learning, "
       "including the benefits and challenges of using games for teaching, the importance of "
       "creating education-based games, and the potential of gamification in education."},
      {"Ethics in Gaming",
       "This group includes topics related to ethical issues in gaming, such as violence, "
       "diversity, monetization, piracy, and inclusion. It also includes discussions on the "
       "responsibility of developers and publishers to balance creative expression with ethical "
       "considerations."},
      {"Monetization in Gaming",
       "This group includes topics related to how games make money, including free-to-play with "
       "in-game purchases, paid games, and pay-to-win models. It also includes discussions on "
       "the ethical implications of micro-transactions and gambling-like systems."},
      {"Video Games as Art",
       "This group includes topics related to the growing acceptance of video games as an "
       "artistic medium, citing examples of games that are considered high art. It also includes "
       "discussions on the combination of traditional art forms and gameplay."},
      {"Game Development",
       "This group includes topics related to game development, including advice for developers, "
       "the importance of good management and communication, and the role of innovation in "
       "creating immersive experiences."},
      {"Representation in Gaming",
       "This group includes topics related to representation in gaming, including diversity in "
       "race and gender, the importance of relatable characters, and the progress that has been "
       "made in the industry."},
      {"Mobile Gaming",
       "This group includes topics related to mobile gaming, including its accessibility and "
       "oversaturation in the market."},
      {"Esports",
       "This group includes topics related to esports, including its benefits, the importance of "
       "physical and mental health, and the need for moderation and balance."},
      {"Gamification",
       "This group includes topics related to gamification, including its use for education and "
       "productivity, the need for entertainment to motivate people, and the potential for "
       "complicity in neoliberal capitalism."},
      {"Physical Health and Gaming",
       "This group includes topics related to the impact of gaming on physical health, including "
       "the potential for reduced physical activity and the benefits and drawbacks of using "
       "games for physical rehabilitation."},
      {"Gaming Communities",
       "This group includes topics related to gaming communities, including their inclusivity "
       "and toxicity levels, the significance of social interactions in gameplay, and tips for "
       "positive game interaction."},
  };
  return c;
}

const std::vector<Catalogue>& gaming_sweeps() {
  static const std::vector<Catalogue> runs = {
      // run 0
      {
          {"The Benefits of Gaming and Education",
           "Use of video games for education and learning, the benefits and challenges of "
           "teaching with games, and the potential of gamification in education."},
          {"Ethical Issues in Gaming",
           "Ethical issues in gaming such as violence, diversity, monetization, piracy, and "
           "inclusion, and the responsibility of developers and publishers to balance creative "
           "expression with ethical considerations."},
          {"Monetization and Business Models in Gaming",
           "How games make money, including free-to-play with in-game purchases, paid games, "
           "pay-to-win models, and the implications of micro-transactions and gambling-like "
           "systems."},
          {"Video Games as Art",
           "The growing acceptance of video games as an artistic medium, games considered high "
           "art, and the combination of traditional art forms and gameplay."},
          {"Gaming and Age Restrictions",
           "Age restrictions and rating systems for purchasing and playing games, and their "
           "regulation and enforcement."},
          {"Game Development and Management",
           "Advice for game developers, the importance of good management and communication, and "
           "the role of innovation in creating immersive experiences."},
          {"Gaming for Relaxation and Nurturing Experiences",
           "Playing games to relax and unwind, comforting and nurturing experiences, and gentle "
           "pacing."},
          {"Immersive World-Building and Story-Driven Games",
           "Rich story-driven games, narrative depth, world-building and environments that draw "
           "players in."},
          {"Diversity and Representation in Gaming",
           "Representation in gaming, including diversity in race and gender, relatable "
           "characters, and the progress made in the industry."},
          {"eSports and Competitive Gaming",
           "Esports and competitive play, benefits for players, and the importance of physical "
           "and mental health, moderation and balance."},
          {"Gaming and Physical Health",
           "The impact of gaming on physical health, reduced physical activity, and the benefits "
           "and drawbacks of using games for physical rehabilitation."},
      },
      // run 1
      {
          {"The Positive Impacts of Gaming",
           "Positive impacts of playing, cognitive gains, mood and wellbeing, and connection for "
           "players."},
          {"Ethical Issues in Gaming",
           "Ethical issues in gaming such as violence, diversity, monetization, piracy, and "
           "inclusion, and the responsibility of developers and publishers to balance creative "
           "expression with ethical considerations."},
          {"Gaming and Art",
           "Acceptance of video games as an artistic medium and the combination of traditional "
           "art forms and gameplay."},
          {"Free-to-Play and Monetization models",
           "Free-to-play games with in-game purchases, paid games, pay-to-win models and "
           "micro-transactions."},
          {"Gaming Industry and Development",
           "Advice for game developers, good management and communication, and innovation in "
           "creating immersive experiences."},
          {"Diversity and Representation in Gaming",
           "Representation in gaming, including diversity in race and gender, relatable "
           "characters, and the progress made in the industry."},
          {"Gaming in Education",
           "Use of video games for education and learning and the potential of gamification in "
           "education."},
          {"Identity in Gaming",
           "Age restrictions and rating systems for games, age verification when purchasing, and "
           "their regulation and enforcement."},
          {"Gaming and Physical Health",
           "The impact of gaming on physical health, reduced activity, and the use of games for "
           "physical rehabilitation."},
          {"Esports",
           "Esports and competitive play, the importance of physical and mental health, and the "
           "need for moderation and balance."},
          {"Positive Gaming Interaction",
           "Gaming communities, their inclusivity and toxicity levels, social interactions in "
           "gameplay, and tips for positive game interaction."},
      },
      // run 2
      {
          {"Using video games for learning and education",
           "Use of video games for education and learning, benefits and challenges of teaching "
           "with games, and gamification in education."},
          {"Ethical concerns in gaming",
           "Ethical issues in gaming such as violence, piracy, and inclusion, and the "
           "responsibility of developers and publishers to balance creative expression with "
           "ethical considerations."},
          {"Video games as art",
           "Growing acceptance of video games as an artistic medium, high art, and the "
           "combination of traditional art forms and gameplay."},
          {"Representations in gaming",
           "Diversity and representation in gaming, race and gender, relatable characters, and "
           "progress in the industry."},
          {"Monetization and business models in gaming",
           "How games make money, including free-to-play purchases, paid games, pay-to-win "
           "models, micro-transactions and gambling-like systems."},
          {"The impact of gaming on physical and mental health",
           "Impact of gaming on physical health, reduced physical activity, and the use of games "
           "for rehabilitation."},
          {"Video games for recreation and relaxation",
           "Playing video games for recreation, leisure and fun in spare time."},
          {"Video games in sports and eSports",
           "Esports and competitive play, the importance of physical and mental health, "
           "moderation and balance."},
          {"Innovation and creativity in game development",
           "Advice for game developers, good management and communication, and the role of "
           "innovation in creating immersive experiences."},
          {"Using gamification for non-entertainment purposes",
           "Gamification for education and productivity, the need for entertainment to motivate "
           "people, and complicity in neoliberal capitalism."},
          {"Positive aspects of gaming",
           "Gaming communities, inclusivity, social interactions in gameplay, and tips for "
           "positive game interaction."},
      },
  };
  return runs;
}

const Catalogue& teaching_baseline() {
  static const Catalogue c = {
      {"Teaching Data Analysis and Interpretation",
       "This group includes topics related to teaching students how to analyze and interpret "
       "data, including identifying good and bad graphs, understanding statistical knowledge, "
       "and teaching critical thinking about data."},
      {"Mentoring and Diversifying the Field",
       "This group includes topics related to mentoring young students and making a difference "
       "in diversifying the field of data analysis."},
      {"Teaching GIS and Geospatial Data",
       "This group includes topics related to teaching GIS software and geospatial data, "
       "including challenges in teaching and the practical use of the software."},
      {"Collaborative Learning and Interpersonal Interaction",
       "This group includes topics related to the benefits of collaborative learning and "
       "interpersonal interaction in acquiring quantitative skills."},
      {"Teaching Research Methods",
       "This group focuses on teaching research methods and the challenges of accessing and "
       "using data. The group emphasizes the importance of technical and statistical skills in "
       "survey research exercises."},
      {"Teaching Programming and Technical Skills",
       "Group related to teaching students programming and technical skills, including the lack "
       "of programming classes available to non-computer science majors and the need for a "
       "quantitative social science minor or data sciences program."},
      {"External Support and Resources for Teaching with Data",
       "Group related to the lack of external support and resources for teaching with data, "
       "including the need for training opportunities and a centralized resource for "
       "instructors."},
  };
  return c;
}

const std::vector<Catalogue>& teaching_sweeps() {
  static const std::vector<Catalogue> runs = {
      // run 0
      {
          {"Teaching Critical Thinking and Interpretation of Data",
           "Teaching students critical thinking about data, analyzing and interpreting graphs "
           "and statistical knowledge."},
          {"Teaching with Data Sources and Tools",
           "Working with data sources and software tools in the classroom, managing and "
           "manipulating data sets."},
          {"Mentoring and Diversifying the Field",
           "Mentoring young students and making a difference in diversifying the field of data "
           "analysis."},
          {"Teaching Statistics and Research Methods",
           "Challenges of accessing and using data in research methods, and statistical skills "
           "in survey exercises."},
          {"Teaching Geospatial Data",
           "Teaching GIS software and geospatial data and its practical use."},
          {"Remote Teaching and Learning",
           "Remote instruction and online delivery of classes during distance learning."},
          {"Sociological Research and Data Skills",
           "Quantitative skills for sociology students and applied research practice."},
      },
      // run 1
      {
          {"Teaching Statistical Literacy",
           "Teaching students statistical knowledge and how to read graphs and data critically."},
          {"Teaching with Data",
           "Bringing real data into the classroom and designing exercises around data sources."},
          {"Mentoring and Diversifying the Field",
           "Mentoring young students and making a difference in diversifying the field of data "
           "analysis."},
          {"Teaching GIS",
           "Teaching GIS software and geospatial data and the challenges of the software in "
           "practice."},
          {"Teaching Research Methods",
           "Teaching research methods, accessing and using data, and statistical skills in "
           "survey exercises."},
          {"Challenges in Teaching with Data",
           "Challenges instructors face when teaching with data, from time constraints to uneven "
           "student preparation."},
          {"Practical Data Skills in Sociology",
           "Quantitative skills for sociology students and applied research practice in course "
           "work."},
      },
      // run 2
      {
          {"Statistical Literacy",
           "Understanding statistics, reading graphs and interpreting numerical results."},
          {"Teaching Challenges",
           "Challenges instructors face when teaching with data, including time constraints and "
           "preparation."},
          {"Diversity and Inclusion",
           "Diversifying the field and mentoring young students from underrepresented "
           "backgrounds."},
          {"Teaching Resources",
           "Support needed and assistance at the university level, including workshops on "
           "computational tools, labs and infrastructure."},
          {"Quantitative Methods",
           "Quantitative research design and statistical skills for survey exercises."},
          {"Programming",
           "Teaching programming and technical skills and the lack of classes for non computer "
           "science majors."},
          {"Remote Instruction",
           "Remote instruction and online delivery of classes during distance learning."},
      },
  };
  return runs;
}

const Catalogue& interviews_baseline() {
  static const Catalogue c = {
      {"Daily Routines",
       "Morning habits, commuting, meals and the rhythm of an ordinary day."},
      {"Community Life",
       "Neighbours, local events, volunteering and a sense of belonging."},
      {"Work and Skills",
       "Jobs, training, learning new skills and workplace challenges."},
  };
  return c;
}

const std::vector<Catalogue>& interviews_sweeps() {
  static const std::vector<Catalogue> runs = {
      {
          {"Everyday Routines", "Morning habits, commuting, meals and the rhythm of the day."},
          {"Belonging and Community", "Neighbours, local events, volunteering and belonging."},
          {"Working Life", "Jobs, training and learning new skills at the workplace."},
      },
      {
          {"Ordinary Days",
           "Morning habits, meals, commuting and the rhythm of an ordinary day."},
          {"Neighbourhood and Community",
           "Local events, neighbours, volunteering and a sense of belonging."},
          {"Skills and Employment", "Jobs, workplace challenges and training for new skills."},
      },
      {
          {"Rhythms of the Day",
           "Commuting, meals, morning habits and the rhythm of daily life."},
          {"Community and Belonging", "Volunteering, local events, neighbours and belonging."},
          {"Learning at Work",
           "Workplace challenges, jobs and learning new skills through training."},
      },
  };
  return runs;
}

// Renames and two-sentence summaries the naming script hands back, one per
// baseline theme.
const Catalogue& naming_catalogue(const DatasetShape& shape) {
  static const Catalogue gaming = {
      {"Games for Education and Diversity",
       "Games have the potential to teach various skills and disciplines, and can be used to "
       "bridge the gap between different target markets. However, there is a need for more "
       "games specifically designed for educational purposes and for greater diversity and "
       "representation in the gaming industry."},
      {"Ethical Issues in Gaming",
       "Developers and publishers need to be aware of what they put in their games, especially "
       "if kids are playing them, and context is important. Games have a responsibility to "
       "recognize and address issues such as sexism and ethical concerns."},
      {"Money Models in Games",
       "Games are funded through purchases, subscriptions and optional extras. The balance "
       "between revenue and fairness remains contested."},
      {"Games as Artistic Works",
       "Games combine visual art, music and interaction. Many now stand alongside established "
       "artistic media."},
      {"Building Better Games",
       "Good games come from good teams. Management, communication and innovation drive "
       "immersive results."},
      {"Representation on Screen",
       "Characters increasingly reflect a diversity of backgrounds. Progress is real but uneven "
       "across the industry."},
      {"Gaming on the Go",
       "Mobile platforms make play accessible anywhere. The market is crowded and competition "
       "is fierce."},
      {"Competitive Play",
       "Esports reward practice and teamwork. Health and balance keep competitors performing."},
      {"Play with Purpose",
       "Game mechanics can motivate learning and productivity. Critics question where "
       "persuasion shades into manipulation."},
      {"Bodies and Play",
       "Gaming shapes physical activity for better and worse. Rehabilitation uses show genuine "
       "promise."},
      {"Playing Together Well",
       "Communities give games their social life. Inclusivity and moderation keep them "
       "welcoming."},
  };
  static const Catalogue teaching = {
      {"Reading Data Critically",
       "Students learn to question graphs and figures. Statistical knowledge anchors that "
       "judgement."},
      {"Widening the Field",
       "Mentoring brings new voices into data analysis. Diversity strengthens the discipline."},
      {"Maps and Spatial Data",
       "Geospatial tools open data to new questions. Learning the software takes sustained "
       "practice."},
      {"Learning Together",
       "Quantitative skills grow fastest in conversation. Group work makes methods stick."},
      {"Methods Under Pressure",
       "Research methods courses juggle access, ethics and rigour. Survey exercises build "
       "technical confidence."},
      {"Code for Everyone",
       "Programming belongs in every curriculum. Students outside computer science need a "
       "clear path in."},
      {"Backing the Instructors",
       "Teaching with data needs institutional support. Shared resources and training fill the "
       "gap."},
  };
  static const Catalogue interviews = {
      {"Shape of the Day", "Routines give days their structure. Small habits carry large "
                           "meaning."},
      {"Life in Common", "Belonging grows out of shared effort. Local events keep neighbours "
                         "connected."},
      {"Growing at Work", "Skills develop through practice and training. Challenges at work "
                          "become chances to learn."},
  };
  if (shape.tag == "gaming") return gaming;
  if (shape.tag == "teaching") return teaching;
  return interviews;
}

const Catalogue& baseline_catalogue(const DatasetShape& shape) {
  if (shape.tag == "gaming") return gaming_baseline();
  if (shape.tag == "teaching") return teaching_baseline();
  return interviews_baseline();
}

const std::vector<Catalogue>& sweep_catalogues(const DatasetShape& shape) {
  if (shape.tag == "gaming") return gaming_sweeps();
  if (shape.tag == "teaching") return teaching_sweeps();
  return interviews_sweeps();
}

}  // namespace

void write_corpus(const std::string& dir, const DatasetShape& shape) {
  fs::create_directories(dir);
  for (int d = 0; d < shape.docs; ++d) {
    std::string text;
    for (int p = 0; p < shape.paragraphs_per_doc; ++p) {
      if (p) text += "\n\n";
      text += make_paragraph(shape, d, p);
    }
    text += "\n";
    csv::write_file(dir + "/" + shape.tag + "_interview_" + pad2(d) + ".txt", text);
  }
}

std::string code_name(const DatasetShape& shape, int raw_index) {
  if (shape.tag == "gaming") {
    switch (raw_index) {
      case 39: return "Marketing of Videogames";
      case 51: return "Violence in Games";
      case 59: return "Online Marketing";
      case 80: return "Marketing and Intent";
      default: break;
    }
  }
  std::string initial(1, static_cast<char>(std::toupper(shape.tag[0])));
  return "Topic " + initial + std::to_string(raw_index);
}

std::string code_description(const DatasetShape& shape, int raw_index) {
  (void)shape;
  return "Respondents reflect on subject " + std::to_string(raw_index) +
         " and how it shapes their experience.";
}

themer::ThemeSet phase3_themes(const DatasetShape& shape) {
  return make_set(baseline_catalogue(shape), shape.reduced_codes, 0.0, 0);
}

std::vector<themer::ThemeSet> sweep_themes(const DatasetShape& shape) {
  std::vector<themer::ThemeSet> sets;
  const auto& runs = sweep_catalogues(shape);
  for (std::size_t i = 0; i < runs.size(); ++i)
    sets.push_back(make_set(runs[i], shape.reduced_codes, shape.sweep_temperature,
                            static_cast<int>(i)));
  return sets;
}

std::vector<evaluator::ReferenceTheme> reference_themes(const DatasetShape& shape) {
  if (shape.tag == "gaming") {
    return {
        {"1", "Educational perspective",
         "Use of video games for education and learning, benefits and challenges of teaching "
         "with games, and the potential of gamification in education.",
         {}},
        {"2", "Psychological Perspective", "", {"psychology"}},
        {"3", "Ethical perspective",
         "Ethical issues in gaming such as violence, diversity, monetization, piracy, and "
         "inclusion, and the responsibility of developers and publishers.",
         {}},
        {"3a", "Violence and Aggression",
         "Concerns about possible impact on players, especially young players, and a causal "
         "link with increased aggressive behaviour.",
         {"violence"}},
        {"3b", "Monetisation",
         "How games make money, free-to-play, in-game purchases, paid games, pay-to-win "
         "models, micro-transactions and gambling-like systems.",
         {}},
        {"3c", "Identity",
         "Diversity and representation in race and gender, relatable characters, and progress "
         "in the industry.",
         {}},
        {"4", "Sociocultural/Artistic perspective",
         "Acceptance of video games as an artistic medium and high art, combining traditional "
         "art forms and gameplay.",
         {}},
        {"5", "Mobile gaming and casual gaming",
         "Accessibility of mobile gaming and oversaturation in the market.", {}},
        {"6", "Game streaming and eSports",
         "Benefits of esports, the importance of physical and mental health, and the need for "
         "moderation and balance.",
         {}},
        {"7", "Innovation and game development",
         "Advice for developers, good management and communication, and the role of innovation "
         "in creating immersive experiences.",
         {}},
        {"8", "Game Marketing", "", {"marketing"}},
        {"9", "Gamer communities",
         "Inclusivity and toxicity of gaming communities, social interactions in gameplay, and "
         "positive game interaction.",
         {}},
        {"10", "Regulations",
         "Age restrictions and rating systems for games, and their regulation and enforcement.",
         {}},
    };
  }
  if (shape.tag == "teaching") {
    return {
        {"1", "Expected student learning outcomes and ways students engage with data",
         "Developing critical thinking about data, teaching students to analyze and interpret "
         "data, graphs and statistical knowledge.",
         {}},
        {"2", "Evidence of Learning Goals in Instructional Praxis",
         "Students working directly with raw data and tools, gathering, managing and "
         "manipulating data to produce analyses and visualizations.",
         {}},
        {"3", "Main Challenges of Teaching with Data",
         "Challenges of accessing and using data when teaching research methods, and the "
         "technical and statistical skills needed in survey exercises.",
         {}},
        {"4", "Instructors' Training and Resource Sharing",
         "Lack of external support and the need for training opportunities and a centralized "
         "resource for instructors teaching with data.",
         {}},
        {"5", "Types of support needed",
         "Assistance at the university level, from labs and infrastructure to workshops on "
         "computational tools offered on an ongoing basis.",
         {}},
    };
  }
  return {
      {"1", "Daily life",
       "Morning habits, commuting, meals and the rhythm of an ordinary day.", {}},
      {"2", "Community",
       "Neighbours, local events, volunteering and a sense of belonging.", {}},
      {"3", "Employment", "Jobs, training, learning new skills and workplace challenges.", {}},
  };
}

std::string run_config_json(const DatasetShape& shape, const std::string& corpus_dir,
                            const std::string& replay_path, const std::string& reference_path,
                            const std::string& runs_dir, int parallelism) {
  json j;
  j["model"] = "gpt-3.5-turbo";
  j["temperature"] = 0.0;
  j["context_limit"] = 4097;
  j["reserved_response_tokens"] = 1000;
  j["parallelism"] = parallelism;
  j["input_dir"] = corpus_dir;
  j["runs_dir"] = runs_dir;
  j["replay_store"] = replay_path;
  j["chunk"] = {{"target_tokens", 2500}, {"slack_fraction", 0.05}, {"boundary", "paragraph"}};
  j["themes"] = {{"n", shape.theme_count}};
  j["review"] = {{"temperature", shape.sweep_temperature},
                 {"k_runs", shape.sweep_runs},
                 {"tau", 0.35}};
  j["compare"] = {{"reference_file", reference_path}, {"tau", 0.35}};
  return j.dump(2) + "\n";
}

namespace {

std::string chunk_key(const corpus::Chunk& chunk) {
  auto pos = chunk.text.find('>');
  if (pos == std::string::npos)
    throw ValidationError("fixture build: chunk text missing paragraph marker");
  return chunk.text.substr(0, pos + 1);
}

std::string coding_response(const DatasetShape& shape, const corpus::Chunk& chunk,
                            int first_index, int count) {
  auto words = text::split_words(chunk.text);
  if (words.size() < 20) throw ValidationError("fixture build: chunk too short for quotes");
  json themes = json::array();
  for (int k = 0; k < count; ++k) {
    int g = first_index + k;
    std::string quote;
    for (std::size_t w = 5 + static_cast<std::size_t>(k) * 3; w < 13 + static_cast<std::size_t>(k) * 3;
         ++w) {
      if (!quote.empty()) quote += ' ';
      quote += std::string(words[w]);
    }
    themes.push_back({{"name", code_name(shape, g)},
                      {"description", code_description(shape, g)},
                      {"quote", quote}});
  }
  return json{{"Themes", themes}}.dump();
}

std::string dedup_response(const DatasetShape& shape) {
  const int pairs = pair_count(shape);
  json items = json::array();
  for (int j = 0; j < shape.reduced_codes; ++j) {
    json indices = json::array();
    indices.push_back(j);
    if (j < pairs) indices.push_back(shape.reduced_codes + j);
    items.push_back({{"topic", code_name(shape, j)}, {"indices", indices}});
  }
  return json{{"items", items}}.dump();
}

std::string theming_response(const themer::ThemeSet& set) {
  json groups = json::array();
  for (const auto& t : set.themes)
    groups.push_back(
        {{"name", t.name}, {"description", t.description}, {"indices", t.member_indices}});
  return json{{"groups", groups}}.dump();
}

void write_store_lines(const std::string& path,
                       std::vector<std::pair<std::string, std::string>> lines) {
  // Stable order by fingerprint keeps regenerated stores byte-identical even
  // when the recording ran concurrently; per-fingerprint order is preserved.
  std::stable_sort(lines.begin(), lines.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("fixture build: cannot write " + path);
  for (const auto& [fp, content] : lines)
    out << json{{"fingerprint", fp}, {"content", content}}.dump() << "\n";
}

}  // namespace

BuildResult build_dataset(const std::string& fixtures_dir, const DatasetShape& shape) {
  fs::create_directories(fixtures_dir);
  BuildResult result;
  result.corpus_dir = fixtures_dir + "/corpus_" + shape.tag;
  result.replay_path = fixtures_dir + "/replay_" + shape.tag + ".jsonl";
  result.reference_path = fixtures_dir + "/reference_" + shape.tag + ".json";
  result.config_path = fixtures_dir + "/config_" + shape.tag + ".json";
  result.bad_dedup_replay = fixtures_dir + "/replay_" + shape.tag + "_bad_dedup.jsonl";
  result.bad_theming_replay = fixtures_dir + "/replay_" + shape.tag + "_bad_theming.jsonl";

  write_corpus(result.corpus_dir, shape);

  corpus::LoadResult loaded = corpus::load_and_clean(result.corpus_dir, {});
  if (!loaded.issues.empty())
    throw ValidationError("fixture build: corpus rejected: " + loaded.issues.front());
  corpus::ChunkConfig chunk_config;  // defaults match run_config_json
  std::vector<corpus::Chunk> chunks;
  for (const auto& doc : loaded.documents) {
    corpus::ChunkResult r = corpus::chunk(doc, chunk_config);
    if (!r.warnings.empty())
      throw ValidationError("fixture build: unexpected chunk warning: " + r.warnings.front());
    for (auto& c : r.chunks) chunks.push_back(std::move(c));
  }
  if (static_cast<int>(chunks.size()) != shape.expected_chunks)
    throw ValidationError("fixture build: " + shape.tag + " produced " +
                          std::to_string(chunks.size()) + " chunks, expected " +
                          std::to_string(shape.expected_chunks));

  // Code counts per chunk: enough three-code chunks to land on the target
  // total, the tail at two.
  const int n_chunks = static_cast<int>(chunks.size());
  const int three_chunks = shape.raw_codes - 2 * n_chunks;
  if (three_chunks < 0 || three_chunks > n_chunks)
    throw ValidationError("fixture build: code total unreachable with 2-3 codes per chunk");

  auto scripted = std::make_shared<ScriptedBackend>();
  int next_index = 0;
  for (int i = 0; i < n_chunks; ++i) {
    int count = i < three_chunks ? 3 : 2;
    scripted->add(gateway::Purpose::initial_coding, chunk_key(chunks[static_cast<std::size_t>(i)]),
                  coding_response(shape, chunks[static_cast<std::size_t>(i)], next_index, count),
                  0.0);
    next_index += count;
  }
  scripted->add(gateway::Purpose::dedup, "", dedup_response(shape), 0.0);
  themer::ThemeSet baseline = phase3_themes(shape);
  scripted->add(gateway::Purpose::theming, "", theming_response(baseline), 0.0);
  for (const auto& set : sweep_themes(shape))
    scripted->add(gateway::Purpose::theming, "", theming_response(set),
                  shape.sweep_temperature);
  const Catalogue& naming = naming_catalogue(shape);
  for (int t = 0; t < shape.theme_count; ++t)
    scripted->add(gateway::Purpose::naming, "'" + code_name(shape, t) + "':",
                  json{{"name", naming[static_cast<std::size_t>(t)].first},
                       {"summary", naming[static_cast<std::size_t>(t)].second}}
                      .dump());

  gateway::GatewayConfig gw_config;
  gw_config.parallelism_cap = 2;
  gateway::Gateway gw(scripted, gw_config);
  auto record = std::make_shared<gateway::ReplayStore>();
  gw.set_record_store(record);

  gateway::ModelConfig model;  // defaults: gpt-3.5-turbo, T=0, 4097/1000
  prompts::TemplateSet templates = prompts::TemplateSet::builtin();
  codegen::CodegenConfig code_config;

  codegen::CodeCorpusResult coded =
      codegen::code_corpus(chunks, gw, model, templates.initial_coding, code_config, "fixture");
  if (!coded.failures.empty())
    throw ValidationError("fixture build: coding failed: " + coded.failures.front());
  if (static_cast<int>(coded.codebook.codes.size()) != shape.raw_codes)
    throw ValidationError("fixture build: raw code count mismatch");
  for (const auto& code : coded.codebook.codes)
    if (code.quote_verified != codegen::Verification::verified)
      throw ValidationError("fixture build: scripted quote failed verification: " + code.name);

  reducer::ReduceResult groups = reducer::reduce(coded.codebook, gw, model, templates.dedup);
  if (!groups.warnings.empty())
    throw ValidationError("fixture build: dedup warning: " + groups.warnings.front());
  reducer::MergeResult merged = reducer::merge(coded.codebook, groups.groups, {});
  if (static_cast<int>(merged.codebook.codes.size()) != shape.reduced_codes)
    throw ValidationError("fixture build: reduced code count mismatch");

  themer::ThemeSet generated = themer::generate_themes(merged.codebook, shape.theme_count, gw,
                                                       model, templates.theming);
  if (static_cast<int>(generated.themes.size()) != shape.theme_count)
    throw ValidationError("fixture build: theme count mismatch");

  reviewer::SweepConfig sweep_config;
  sweep_config.n = shape.theme_count;
  sweep_config.temperature = shape.sweep_temperature;
  sweep_config.k_runs = shape.sweep_runs;
  reviewer::SweepResult swept =
      reviewer::sweep(merged.codebook, sweep_config, gw, model, templates.theming);
  if (!swept.failures.empty())
    throw ValidationError("fixture build: sweep failure: " + swept.failures.front());

  for (const auto& theme : generated.themes)
    themer::name_theme(theme, merged.codebook, gw, model, templates.naming);

  // Persist the recorded exchanges in deterministic order, plus two
  // corrupted variants whose dedup / theming reply names an index outside
  // the codebook (for abort-path tests).
  std::vector<std::pair<std::string, std::string>> lines, bad_dedup, bad_theming;
  const std::string bad_dedup_content =
      json{{"items", json::array({json{{"topic", "noise"}, {"indices", {0, 100000}}}})}}.dump();
  const std::string bad_theming_content =
      json{{"groups", json::array({json{{"name", "Noise"},
                                        {"description", "invalid members"},
                                        {"indices", {0, 100000}}}})}}
          .dump();
  for (const auto& e : scripted->log()) {
    lines.emplace_back(e.fingerprint, e.content);
    bool is_dedup = e.purpose == gateway::Purpose::dedup;
    bool is_base_theming = e.purpose == gateway::Purpose::theming && e.temperature == 0.0;
    bad_dedup.emplace_back(e.fingerprint, is_dedup ? bad_dedup_content : e.content);
    bad_theming.emplace_back(e.fingerprint, is_base_theming ? bad_theming_content : e.content);
  }
  write_store_lines(result.replay_path, std::move(lines));
  write_store_lines(result.bad_dedup_replay, std::move(bad_dedup));
  write_store_lines(result.bad_theming_replay, std::move(bad_theming));

  csv::write_file(result.reference_path, evaluator::reference_to_json(reference_themes(shape)));
  csv::write_file(result.config_path,
                  run_config_json(shape, "corpus_" + shape.tag, "replay_" + shape.tag + ".jsonl",
                                  "reference_" + shape.tag + ".json", "runs/" + shape.tag, 2));
  return result;
}

const char* const kPoetsPrompt = "write me the names of the 3 most important Italian poets";
const char* const kPoetsResponse =
    "1. Dante Alighieri\n2. Francesco Petrarca\n3. Giovanni Boccaccio";

gateway::ChatRequest poets_request() {
  gateway::ChatRequest req;
  req.purpose = gateway::Purpose::probe;
  req.messages.push_back({"user", kPoetsPrompt});
  return req;
}

void build_poets_store(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValidationError("fixture build: cannot write " + path);
  out << json{{"fingerprint", gateway::fingerprint(poets_request())},
              {"content", kPoetsResponse}}
             .dump()
      << "\n";
}

void build_all(const std::string& fixtures_dir) {
  fs::create_directories(fixtures_dir);
  json manifest;
  manifest["files"] = json::array();
  auto note = [&](const std::string& path, const std::string& origin,
                  const std::string& description) {
    manifest["files"].push_back({{"path", fs::path(path).filename().string()},
                                 {"origin", origin},
                                 {"description", description}});
  };
  for (const DatasetShape& shape : {gaming_shape(), teaching_shape(), interviews_shape()}) {
    BuildResult r = build_dataset(fixtures_dir, shape);
    note(r.corpus_dir, "synthetic",
         "Generated interview corpus shaped to the published chunk counts for the '" + shape.tag +
             "' dataset.");
    note(r.replay_path, "scripted",
         "Recorded model exchanges; theme names and counts transcribed from the source study's "
         "published tables, descriptions and codes synthetic.");
    note(r.reference_path, "transcribed",
         "Reference themes named as in the original analysts' reports, with condensed "
         "descriptions authored for this test suite.");
    note(r.config_path, "synthetic", "Run configuration for the fixture dataset.");
    note(r.bad_dedup_replay, "scripted", "Replay store with an out-of-range dedup index.");
    note(r.bad_theming_replay, "scripted", "Replay store with an out-of-range theming index.");
  }
  build_poets_store(fixtures_dir + "/replay_poets.jsonl");
  note(fixtures_dir + "/replay_poets.jsonl", "transcribed",
       "Single smoke-test exchange reproduced from the source study's worked example.");
  csv::write_file(fixtures_dir + "/manifest.json", manifest.dump(2) + "\n");
}

}  // namespace taforge::fixtures
