// Copyright 2026 The D3 Authors.
//
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

#include "d3/gateway/pos.hpp"

#include <array>
#include <cctype>
#include <string>
#include <unordered_map>

namespace d3::gateway {

namespace {

constexpr std::array<const char*, 16> kNames = {"VERB", "NOUN", "PROPN", "NUM",   "ADV",  "ADP",
                                               "ADJ",  "PRON", "DET",   "AUX",   "CCONJ", "SCONJ",
                                               "PART", "INTJ", "PUNCT", "X"};

const std::unordered_map<std::string_view, PosTag>& lexicon() {
  static const auto* table = [] {
    auto* m = new std::unordered_map<std::string_view, PosTag>;
    auto add = [m](PosTag tag, std::initializer_list<std::string_view> words) {
      for (auto w : words) m->emplace(w, tag);
    };
    add(PosTag::PRON, {"i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "he", "him",
                       "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself", "we", "us",
                       "our", "ours", "ourselves", "they", "them", "their", "theirs", "themselves", "who",
                       "whom", "whose", "what", "which", "someone", "anyone", "everyone", "something",
                       "anything", "everything", "nothing", "i'm", "i've", "i'd", "i'll", "you're",
                       "it's", "that's", "we're", "they're", "he's", "she's"});
    add(PosTag::DET, {"a", "an", "the", "this", "that", "these", "those", "some", "any", "every", "each",
                      "no", "all", "both", "either", "neither", "another", "such"});
    add(PosTag::AUX, {"am", "is", "are", "was", "were", "be", "been", "being", "do", "does", "did", "will",
                      "would", "can", "could", "should", "shall", "may", "might", "must", "'m", "'s", "'re",
                      "'ll", "'d", "'ve", "don't", "doesn't", "didn't", "can't", "won't", "isn't",
                      "aren't", "wasn't", "weren't", "wouldn't", "couldn't", "shouldn't"});
    add(PosTag::CCONJ, {"and", "or", "but", "nor", "yet", "plus"});
    add(PosTag::SCONJ, {"because", "if", "while", "although", "though", "unless", "whether", "since",
                        "than", "when", "where", "until"});
    add(PosTag::PART, {"to", "not", "n't"});
    add(PosTag::ADP, {"in", "on", "at", "of", "for", "with", "from", "by", "about", "into", "over",
                      "under", "after", "before", "around", "through", "during", "without", "near",
                      "across", "behind", "between"});
    add(PosTag::INTJ, {"yes", "yeah", "yep", "hi", "hello", "hey", "oh", "wow", "lol", "ok", "okay", "um",
                       "uh", "haha", "hmm", "please", "thanks", "cool", "nope", "sure"});
    add(PosTag::ADV, {"very", "really", "too", "also", "just", "so", "now", "then", "here", "there",
                      "always", "never", "often", "sometimes", "usually", "still", "already", "again",
                      "almost", "soon", "well", "much", "more", "most", "quite", "even", "ever", "away",
                      "back", "home", "today", "tonight", "together", "maybe", "how", "why"});
    add(PosTag::NUM, {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                      "eleven", "twelve", "twenty", "thirty", "forty", "fifty", "hundred", "thousand",
                      "million"});
    add(PosTag::ADJ, {"good", "bad", "big", "small", "little", "new", "old", "young", "great", "happy", "sad",
                      "favorite", "favourite", "nice", "best", "fun", "busy", "hard", "long", "short", "tall",
                      "red", "blue", "green", "black", "white", "yellow", "pink", "purple", "pretty",
                      "large", "huge", "high", "low", "hot", "cold", "fat", "single", "married", "vegan",
                      "vegetarian", "rich", "poor", "free", "real", "true", "other", "many",
                      "few", "first", "last", "only"});
    add(PosTag::VERB, {"like", "love", "have", "has", "had", "work", "works", "live", "lives", "play",
                       "plays", "enjoy", "enjoys", "want", "wants", "go", "goes", "went", "get", "got", "make",
                       "made", "read", "eat", "eats", "drink", "drive", "drives", "own", "owns", "hate",
                       "hates", "know", "think", "see", "watch", "listen", "cook", "bake", "run", "swim",
                       "write", "sing", "dance", "travel", "study", "teach", "grew", "grow", "hope", "need",
                       "feel", "take", "come", "say", "try", "help", "paint", "hike", "collect",
                       "prefer", "volunteer", "visit", "speak", "draw"});
    return m;
  }();
  return *table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 1 && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const char* to_string(PosTag tag) { return kNames[static_cast<std::size_t>(tag)]; }

std::optional<PosTag> parse_pos_tag(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (name == kNames[i]) return static_cast<PosTag>(i);
  return std::nullopt;
}

bool is_target_tag(PosTag tag) {
  switch (tag) {
    case PosTag::VERB:
    case PosTag::NOUN:
    case PosTag::PROPN:
    case PosTag::NUM:
    case PosTag::ADV:
    case PosTag::ADP:
    case PosTag::ADJ:
      return true;
    default:
      return false;
  }
}

std::vector<PosTag> PosTagger::tag_all(const corpus::Tokens& tokens) const {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(tag(t));
  return tags;
}

PosTag RulePosTagger::tag(std::string_view token) const {
  if (token.empty()) return PosTag::X;
  if (corpus::is_punctuation(token)) return PosTag::PUNCT;
  if (auto it = lexicon().find(token); it != lexicon().end()) return it->second;

  bool digits = true;
  for (char c : token)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != ',') digits = false;
  if (digits) return PosTag::NUM;

  if (ends_with(token, "ly")) return PosTag::ADV;
  if (ends_with(token, "ing") || ends_with(token, "ed")) return PosTag::VERB;
  for (std::string_view suffix : {"ful", "ous", "ive", "able", "ible", "less", "ish", "ic", "al", "est"})
    if (ends_with(token, suffix)) return PosTag::ADJ;
  return PosTag::NOUN;
}

}  // namespace d3::gateway
