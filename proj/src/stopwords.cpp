#include "psm/stopwords.hpp"

namespace psm {

const char* const kStopwordListVersion = "en-1";

namespace {

// Classic English list. Contraction stems (don, isn, wasn, ...) are listed
// separately because the tokenizer splits "don't" into "don" + "t".
const char* const kWords[] = {
    "about", "above", "after", "again", "against", "all", "am", "an", "and",
    "any", "are", "aren", "as", "at", "be", "because", "been", "before",
    "being", "below", "between", "both", "but", "by", "can", "cannot",
    "could", "couldn", "did", "didn", "do", "does", "doesn", "doing", "don",
    "down", "during", "each", "few", "for", "from", "further", "had", "hadn",
    "has", "hasn", "have", "haven", "having", "he", "her", "here", "hers",
    "herself", "him", "himself", "his", "how", "if", "in", "into", "is",
    "isn", "it", "its", "itself", "just", "ll", "me", "mightn", "more",
    "most", "mustn", "my", "myself", "needn", "no", "nor", "not", "now",
    "of", "off", "on", "once", "only", "or", "other", "our", "ours",
    "ourselves", "out", "over", "own", "re", "same", "shan", "she", "should",
    "shouldn", "so", "some", "such", "than", "that", "the", "their",
    "theirs", "them", "themselves", "then", "there", "these", "they", "this",
    "those", "through", "to", "too", "under", "until", "up", "ve", "very",
    "was", "wasn", "we", "were", "weren", "what", "when", "where", "which",
    "while", "who", "whom", "why", "will", "with", "won", "would", "wouldn",
    "you", "your", "yours", "yourself", "yourselves",
};

}  // namespace

const std::unordered_set<std::string>& english_stopwords() {
  static const std::unordered_set<std::string> set(std::begin(kWords), std::end(kWords));
  return set;
}

bool is_stopword(const std::string& token) {
  return english_stopwords().count(token) > 0;
}

}  // namespace psm
