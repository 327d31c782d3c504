#include "dbowsum/text.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

using dbowsum::count_words;
using dbowsum::segment_sentences;
using dbowsum::tokenize;
using dbowsum::truncate_words;

TEST(SegmentSentences, HandFixture) {
  struct Case {
    std::string text;
    std::vector<std::string> expected;
  };
  const std::vector<Case> cases = {
      {"The cat sat. It slept.", {"The cat sat.", "It slept."}},
      {"Dr. Smith arrived.", {"Dr. Smith arrived."}},
      {"", {}},
      {"   \n\t ", {}},
      {"He saw Mr. J. Fox. Then he left.", {"He saw Mr. J. Fox.", "Then he left."}},
      {"Wait! Really? Yes.", {"Wait!", "Really?", "Yes."}},
      {"He lives in the U.S. Mary visits.", {"He lives in the U.S. Mary visits."}},
      {"No trailing terminator", {"No trailing terminator"}},
      {"First line.\nSecond line came. Third.", {"First line.", "Second line came.", "Third."}},
      {"It cost $5.50 today. Cheap!", {"It cost $5.50 today.", "Cheap!"}},
      {"He cited i.e. Smith. Then left.", {"He cited i.e. Smith.", "Then left."}},
      {"No. 5 was first. No. 6 followed.", {"No. 5 was first.", "No. 6 followed."}},
  };
  for (const Case& c : cases) {
    EXPECT_EQ(segment_sentences(c.text), c.expected) << "input: " << c.text;
  }
}

TEST(SegmentSentences, LowercaseContinuationDoesNotSplit) {
  EXPECT_EQ(segment_sentences("He stopped. then he ran."),
            std::vector<std::string>{"He stopped. then he ran."});
}

TEST(SegmentSentences, ConcatenationPreservesNonWhitespace) {
  const std::string text = "  A first one. Then a second!  And a third?  ";
  std::string joined;
  for (const std::string& s : segment_sentences(text)) joined += s;
  std::string expected;
  for (char c : text) {
    if (!dbowsum::detail::is_ascii_space(static_cast<unsigned char>(c))) expected += c;
  }
  std::string got;
  for (char c : joined) {
    if (!dbowsum::detail::is_ascii_space(static_cast<unsigned char>(c))) got += c;
  }
  EXPECT_EQ(got, expected);
}

TEST(Tokenize, HandFixture) {
  EXPECT_EQ(tokenize("The Cat, sat!"), (std::vector<std::string>{"the", "cat", "sat"}));
  EXPECT_EQ(tokenize("state-of-the-art"), (std::vector<std::string>{"state-of-the-art"}));
  EXPECT_EQ(tokenize("   "), (std::vector<std::string>{}));
  EXPECT_EQ(tokenize("don't stop"), (std::vector<std::string>{"don't", "stop"}));
  EXPECT_EQ(tokenize("(hello) [world]"), (std::vector<std::string>{"hello", "world"}));
  EXPECT_EQ(tokenize("42nd --- time"), (std::vector<std::string>{"42nd", "time"}));
  EXPECT_EQ(tokenize("the U.S. won"), (std::vector<std::string>{"the", "u.s", "won"}));
}

TEST(Tokenize, KeepsMultibyteUtf8) {
  EXPECT_EQ(tokenize("a caf\xc3\xa9."), (std::vector<std::string>{"a", "caf\xc3\xa9"}));
}

TEST(Tokenize, IdempotentOnOwnOutput) {
  const std::vector<std::string> once = tokenize("The Baker's (best) state-of-the-art loaf!");
  std::string joined;
  for (const std::string& t : once) {
    if (!joined.empty()) joined += ' ';
    joined += t;
  }
  EXPECT_EQ(tokenize(joined), once);
}

TEST(CountWords, WhitespaceDelimited) {
  EXPECT_EQ(count_words(""), 0);
  EXPECT_EQ(count_words("   "), 0);
  EXPECT_EQ(count_words("one"), 1);
  EXPECT_EQ(count_words("a b  c"), 3);
  EXPECT_EQ(count_words(" a\nb\tc "), 3);
}

TEST(TruncateWords, CutsAtWordBoundary) {
  EXPECT_EQ(truncate_words("a b c", 2), "a b");
  EXPECT_EQ(truncate_words("a b c", 9), "a b c");
  EXPECT_EQ(truncate_words("a b c", 0), "");
  EXPECT_EQ(truncate_words("  a\n b ", 2), "a b");
  EXPECT_EQ(count_words(truncate_words("w x y z w x y z", 5)), 5);
}
