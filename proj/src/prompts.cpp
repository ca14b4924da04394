// Copyright 2026 The Muse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "muse/prompts.hpp"

#include <algorithm>
#include <set>

#include "muse/error.hpp"
#include "muse/hash.hpp"

namespace muse::prompts {
namespace {

constexpr std::string_view kRefineConcepts =
    R"(A scientist has written the following papers:
{{titles}}

I have a noisy list of the researchers' topics of interest, and I would like your help in filtering them. Please look at the list below and return all concepts that are relevant to the scientist's research (based on their paper titles) and meaningful in the context of their research direction. The concepts can be detailed; I mainly want you to filter out concepts that are not meaningful, words that are not concepts, or concepts that are too general for the direction of the scientist (e.g., "artificial intelligence" might be a meaningful concept for a geologist, but not for a machine learning researcher). Do not change or add any concepts -- only remove or keep them.

concept list=[{{concepts}}])";

constexpr std::string_view kIdeaOutlineTail =
    R"(Then, do the following three steps 3 times, improving in each time the response:
A) Describe 4 interesting and new scientific contexts, in which those two concepts might appear together in a natural and useful way.
B) Criticize the 4 contexts (one short sentence each), based on how well the contexts merge the idea of the two concepts.
C) Give a 2 sentence summary of your reflections above, on how well one can combine these concepts naturally and interestingly.

Then, start finding a project. Taking your reflections from (A-C) into account, define in your response a project title, followed by a brief explanation of the project's main objective.

Finally, address the following questions (Take the full reflections (A-C) into account):
What specific interesting research questions will this project address, that will lead to innovative novel results? [2 bullet points, one sentence each])";

constexpr std::string_view kIdeaWithPairHead =
    R"(Two researchers A and B, with expertise in "{{concept1}}" and "{{concept2}}" respectively, are eager to collaborate on a novel interdisciplinary project that leverages their unique strengths and creates synergy between their fields.

To better understand their backgrounds, here are the titles of recent publications from each researcher:
Researcher A:
{{titles_a}}
Researcher B:
{{titles_b}}

Please suggest a creative and surprising scientific project that combines "{{concept1}}" and "{{concept2}}". In your response, follow this outline:

First, explain "{{concept1}}" and "{{concept2}}" in one short sentence each.

)";

constexpr std::string_view kIdeaWithoutPairHead =
    R"(Two researchers A and B are eager to collaborate on a novel interdisciplinary project that leverages their unique strengths and creates synergy between their fields.

To better understand their backgrounds, here are the titles of recent publications from each researcher:
Researcher A:
{{titles_a}}
Researcher B:
{{titles_b}}

From the paper titles above, identify one scientific concept that represents the expertise of Researcher A ("concept1") and one scientific concept that represents the expertise of Researcher B ("concept2"). Please suggest a creative and surprising scientific project that combines "concept1" and "concept2". In your response, follow this outline:

First, name "concept1" and "concept2" and explain them in one short sentence each.

)";

constexpr std::string_view kZeroShotRanking =
    R"(I will present two research ideas. The first idea is for Researchers A1 and B1, and the second idea is for Researchers A2 and B2.
Researchers A1 and A2 will evaluate how interesting they find the respective ideas.
You will determine which of the two suggestions will be considered more interesting.

The suggestions are randomly ordered, and you should evaluate each suggestion independently and without bias.

### Researcher A1 Context and Suggestion 1:
Here are a few papers of Researcher A1:
{{papers_a1}}

Suggestion 1: {{suggestion1}}

**Summary for Researcher A1**: Provide a one-sentence summary of Suggestion 1 in the context of Researcher A1.

### Researcher A2 Context and Suggestion 2:
Here are a few papers of Researcher A2:
{{papers_a2}}

Suggestion 2: {{suggestion2}}

**Summary for Researcher A2**: Provide a one-sentence summary of Suggestion 2 in the context of Researcher A2.

### Evaluation:
Based on the summaries and the research interests of A1 and A2, evaluate which suggestion is more likely to be ranked higher in terms of interest.
**Result**: If Suggestion 1 is ranked higher by Researcher A1 than Suggestion 2 is by Researcher A2, write 'RESULT: SUGGESTION 1'. Otherwise, write 'RESULT: SUGGESTION 2'.
Remember, the suggestions are randomly ordered, and your evaluation should be impartial and based solely on the research interests of A1 and A2.)";

constexpr std::string_view kLexiconFilter =
    R"(Below is a list of candidate scientific concepts that were extracted automatically from paper titles and abstracts. Please return all entries that are meaningful scientific concepts, and filter out entries that are not concepts, such as sentence fragments, verbs, or generic phrases. Do not change or add any concepts -- only remove or keep them. Return the kept entries in the same format.

concept list=[{{concepts}}])";

const std::string kIdeaWithPair =
    std::string(kIdeaWithPairHead) + std::string(kIdeaOutlineTail);
const std::string kIdeaWithoutPair =
    std::string(kIdeaWithoutPairHead) + std::string(kIdeaOutlineTail);

const PromptTemplate kTemplates[] = {
    {"refine_concepts", kRefineConcepts},
    {"idea_with_pair", kIdeaWithPair},
    {"idea_without_pair", kIdeaWithoutPair},
    {"zero_shot_ranking", kZeroShotRanking},
    {"lexicon_filter", kLexiconFilter},
};

}  // namespace

std::string PromptTemplate::hash() const { return sha256_hex(text); }

std::vector<std::string> PromptTemplate::slots() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  size_t pos = 0;
  while ((pos = text.find("{{", pos)) != std::string_view::npos) {
    auto end = text.find("}}", pos + 2);
    if (end == std::string_view::npos) break;
    std::string name(text.substr(pos + 2, end - pos - 2));
    if (seen.insert(name).second) out.push_back(name);
    pos = end + 2;
  }
  return out;
}

const PromptTemplate& refine_concepts() { return kTemplates[0]; }
const PromptTemplate& idea_with_pair() { return kTemplates[1]; }
const PromptTemplate& idea_without_pair() { return kTemplates[2]; }
const PromptTemplate& zero_shot_ranking() { return kTemplates[3]; }
const PromptTemplate& lexicon_filter() { return kTemplates[4]; }

const std::vector<const PromptTemplate*>& all_templates() {
  static const std::vector<const PromptTemplate*> all = {
      &kTemplates[0], &kTemplates[1], &kTemplates[2], &kTemplates[3],
      &kTemplates[4]};
  return all;
}

std::string render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& values) {
  auto slots = tmpl.slots();
  for (const auto& [name, _] : values) {
    if (std::find(slots.begin(), slots.end(), name) == slots.end()) {
      throw ValidationError("template " + std::string(tmpl.id) +
                            " has no slot '" + name + "'");
    }
  }
  std::string out;
  out.reserve(tmpl.text.size() + 256);
  size_t pos = 0;
  while (pos < tmpl.text.size()) {
    auto open = tmpl.text.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.text.substr(pos));
      break;
    }
    auto close = tmpl.text.find("}}", open + 2);
    out.append(tmpl.text.substr(pos, open - pos));
    std::string name(tmpl.text.substr(open + 2, close - open - 2));
    auto it = values.find(name);
    if (it == values.end()) {
      throw ValidationError("template " + std::string(tmpl.id) +
                            " slot '" + name + "' not filled");
    }
    out += it->second;
    pos = close + 2;
  }
  return out;
}

}  // namespace muse::prompts
