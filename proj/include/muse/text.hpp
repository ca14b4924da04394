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

#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace muse {

// NFKC, lowercase, collapse whitespace runs to one space, trim. Hyphens and
// other punctuation are left in place. Idempotent.
std::string normalize_text(std::string_view raw);

// A word token of normalized text. `phrase_start` is true when the token is
// separated from the previous one by anything other than whitespace
// (punctuation, a segment boundary), i.e. no phrase may span the gap.
struct Token {
  std::string text;
  bool phrase_start = false;
};

// Splits text into word tokens: maximal runs of letters, digits, marks and
// inner hyphens/apostrophes. Expects normalized input.
std::vector<Token> tokenize(std::string_view normalized);

// Joins word tokens with single spaces.
std::string join_words(const std::vector<std::string>& words);
std::vector<std::string> split_words(std::string_view phrase);

std::string_view trim(std::string_view s);

// Reads a one-entry-per-line file (UTF-8). Blank lines and lines starting
// with '#' are skipped; every entry is passed through normalize_text.
std::set<std::string> read_word_list(const std::string& path);

std::string read_file(const std::string& path);
// Writes via a temporary sibling and rename so readers never see a torn file.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace muse
