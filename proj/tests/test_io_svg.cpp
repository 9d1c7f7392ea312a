#include "scalegraph/io.hpp"
#include "scalegraph/svg.hpp"
#include "scalegraph/errors.hpp"

#include "testutil.hpp"

#include <doctest.h>

using namespace scalegraph;
using testutil::TempDir;

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace

TEST_CASE("positions TSV round trip, sorted by id") {
    TempDir dir;
    const PositionMap positions{{"zeta", 0.25}, {"alpha", -1.0}, {"mid", 0.0}};
    write_positions_tsv(dir.path() / "p.tsv", positions);
    const std::string raw = read_file(dir.path() / "p.tsv");
    CHECK(raw.find("alpha") < raw.find("mid"));
    CHECK(raw.find("mid") < raw.find("zeta"));
    CHECK(read_positions_tsv(dir.path() / "p.tsv") == positions);
}

TEST_CASE("positions TSV rejects malformed rows") {
    TempDir dir;
    write_file(dir.path() / "bad.tsv", "a\tnot-a-number\n");
    CHECK_THROWS_AS(read_positions_tsv(dir.path() / "bad.tsv"), FormatError);
    write_file(dir.path() / "dup.tsv", "a\t1\na\t2\n");
    CHECK_THROWS_AS(read_positions_tsv(dir.path() / "dup.tsv"), FormatError);
    write_file(dir.path() / "empty.tsv", "");
    CHECK_THROWS_AS(read_positions_tsv(dir.path() / "empty.tsv"), FormatError);
}

TEST_CASE("file digest is stable and content sensitive") {
    TempDir dir;
    write_file(dir.path() / "a.txt", "hello");
    write_file(dir.path() / "b.txt", "hello");
    write_file(dir.path() / "c.txt", "hellO");
    CHECK(file_digest(dir.path() / "a.txt") == file_digest(dir.path() / "b.txt"));
    CHECK(file_digest(dir.path() / "a.txt") != file_digest(dir.path() / "c.txt"));
    CHECK(file_digest(dir.path() / "a.txt").size() == 16);
    CHECK(input_digest(dir.path()).size() == 16);
}

TEST_CASE("annotated corpus writer round trips through the loader") {
    Corpus corpus;
    Document doc;
    doc.id = "d1";
    doc.tokens = {{"Obama", "obama", "PROPN", "PER", "dbr:Barack_Obama"},
                  {"spoke", "speak", "VERB", {}, {}}};
    corpus.documents.push_back(doc);

    TempDir dir;
    write_annotated_corpus(dir.path() / "out", corpus);
    const Corpus loaded = load_annotated_corpus(dir.path() / "out");
    REQUIRE(loaded.size() == 1);
    REQUIRE(loaded.documents[0].tokens.size() == 2);
    CHECK(loaded.documents[0].tokens[0].entity == "dbr:Barack_Obama");
    CHECK_FALSE(loaded.documents[0].tokens[1].ner.has_value());

    // writing the loaded corpus again reproduces the bytes
    write_annotated_corpus(dir.path() / "again", loaded);
    CHECK(read_file(dir.path() / "again" / "d1.tsv") ==
          read_file(dir.path() / "out" / "d1.tsv"));
}

TEST_CASE("scatter SVG annotates r = 1.00 for collinear points") {
    const GoldPositions gold{{{"a", 1.0}, {"b", 2.0}, {"c", 3.0}}};
    const PositionMap pred{{"a", 2.0}, {"b", 4.0}, {"c", 6.0}};
    const std::string svg = render_scatter_svg(pred, gold);
    CHECK(svg.find("r = 1.00") != std::string::npos);
    CHECK(count_occurrences(svg, "<circle") == 3);
}

TEST_CASE("scatter SVG is deterministic and uses the id intersection") {
    const GoldPositions gold{{{"a", 1.0}, {"b", 2.0}, {"c", 3.0}, {"only_gold", 4.0}}};
    const PositionMap pred{{"a", 0.5}, {"b", 1.2}, {"c", 0.9}, {"only_pred", 2.0}};
    const std::string first = render_scatter_svg(pred, gold);
    const std::string second = render_scatter_svg(pred, gold);
    CHECK(first == second);
    CHECK(count_occurrences(first, "<circle") == 3);

    const PositionMap tiny{{"a", 0.5}};
    CHECK_THROWS_AS(render_scatter_svg(tiny, gold), FormatError);
}
