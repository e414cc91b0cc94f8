#include "falcon/wikidata_id.h"

#include <gtest/gtest.h>

namespace falcon {
namespace {

TEST(WikidataId, ParsesItemsAndProperties) {
  auto q = WikidataId::Parse("Q76");
  ASSERT_TRUE(q);
  EXPECT_TRUE(q->is_item());
  EXPECT_EQ(q->number(), 76u);
  EXPECT_EQ(q->ToString(), "Q76");
  auto p = WikidataId::Parse("P26");
  ASSERT_TRUE(p);
  EXPECT_TRUE(p->is_property());
}

TEST(WikidataId, RejectsMalformed) {
  for (const char *bad : {"", "Q", "q76", "Q76a", "L7", " Q1", "P-1", "Q1.5"}) {
    EXPECT_FALSE(WikidataId::Parse(bad)) << bad;
  }
}

TEST(WikidataId, OrdersByKindThenNumber) {
  EXPECT_LT(WikidataId::Item(9), WikidataId::Item(10));
  EXPECT_LT(WikidataId::Item(999), WikidataId::Property(1));
}

TEST(WikidataId, Iri) {
  EXPECT_EQ(ToIri(WikidataId::Item(76)), "http://www.wikidata.org/entity/Q76");
  EXPECT_EQ(ToIri(WikidataId::Property(26)), "http://www.wikidata.org/prop/direct/P26");
}

}  // namespace
}  // namespace falcon
