// Copyright 2026 The lingeo Authors
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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lingeo/error.hpp"
#include "lingeo/porter_stemmer.hpp"

using lingeo::corpus::porter_stem;

TEST(Porter, ReferenceWordList) {
  std::ifstream in(std::string(LINGEO_TEST_DATA) + "/porter_reference.txt");
  ASSERT_TRUE(in);
  std::string line;
  std::size_t checked = 0, wrong = 0;
  while (std::getline(in, line)) {
    // "word stem"; the stem can be empty ("s").
    const auto sp = line.find(' ');
    if (sp == std::string::npos) continue;
    const std::string word = line.substr(0, sp);
    const std::string stem = line.substr(sp + 1);
    ++checked;
    if (porter_stem(word) != stem) {
      ++wrong;
      ADD_FAILURE() << word << " -> " << porter_stem(word) << ", expected " << stem;
      if (wrong > 20) break;
    }
  }
  EXPECT_GT(checked, 3000u);
  EXPECT_EQ(wrong, 0u);
}

TEST(Porter, ClassicExamples) {
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("hopping"), "hop");
  EXPECT_EQ(porter_stem("generalizations"), "gener");
}

TEST(Porter, ShortAndForeignWordsUnchanged) {
  EXPECT_EQ(porter_stem("is"), "i");
  EXPECT_EQ(porter_stem("a"), "a");
  EXPECT_EQ(porter_stem("caf\xc3\xa9s"), "caf\xc3\xa9s");
}
