#include "vcm/ingest.hpp"

#include "vcm/store.hpp"
#include "vcm/time_util.hpp"

#include "git_fixture.hpp"
#include "tmpdir.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace vcm;
using vcm::test::GitFixture;
using vcm::test::TempDir;

namespace {

std::vector<CommitRecord> collect(const std::filesystem::path& repo, const ScanConfig& cfg,
                                  ScanReport* report = nullptr) {
    std::vector<CommitRecord> records;
    auto r = scan_repository(repo, "fixture", cfg,
                             [&records](CommitRecord&& c) { records.push_back(std::move(c)); });
    if (report)
        *report = r;
    return records;
}

constexpr int64_t kBase = 1514764800;  // 2018-01-01T00:00:00Z

}  // namespace

TEST_CASE("linear history yields one record per commit") {
    TempDir tmp;
    GitFixture repo(tmp.file("repo"));
    repo.write("setup.py", "print('hi')\n");
    repo.commit("first", kBase - 60, kBase);
    repo.write("a.txt", "a\n");
    repo.commit("second", kBase + 100, kBase + 200);
    repo.write("b.txt", "b\n");
    std::string head = repo.commit("third", kBase + 300, kBase + 400);

    ScanReport report;
    auto records = collect(repo.dir(), {}, &report);
    REQUIRE(records.size() == 3);
    CHECK(report.seen == 3);
    CHECK(report.emitted == 3);
    CHECK(report.skipped == 0);

    // rev-list emits newest first
    CHECK(records[0].commit_id == head);
    CHECK(records[0].message == "third\n");
    CHECK(records[0].committer_date == kBase + 400);
    CHECK(records[0].author_date == kBase + 300);
    CHECK(records[0].root_entries == RootListing{"a.txt", "b.txt", "setup.py"});
    CHECK(records[2].root_entries == RootListing{"setup.py"});
    CHECK(records[0].repo_id == "fixture");

    // every commit id is unique
    auto ids = records;
    std::sort(ids.begin(), ids.end(),
              [](const auto& a, const auto& b) { return a.commit_id < b.commit_id; });
    CHECK(std::adjacent_find(ids.begin(), ids.end(), [](const auto& a, const auto& b) {
              return a.commit_id == b.commit_id;
          }) == ids.end());
}

TEST_CASE("merge diamond yields four records without duplicates") {
    TempDir tmp;
    GitFixture repo(tmp.file("repo"));
    repo.write("base.txt", "base\n");
    repo.commit("base", kBase, kBase);
    repo.branch("side");
    repo.write("main.txt", "m\n");
    repo.commit("main work", kBase + 100, kBase + 100);
    repo.checkout("side");
    repo.write("side.txt", "s\n");
    repo.commit("side work", kBase + 200, kBase + 200);
    repo.checkout("main");
    repo.git({"-c", "user.name=Fixture", "-c", "user.email=fixture@example.invalid", "merge",
              "-q", "--no-ff", "-m", "merge side", "side"});

    auto records = collect(repo.dir(), {});
    CHECK(records.size() == 4);
    CHECK(records.size() == repo.rev_list_count());
}

TEST_CASE("two branches sharing commits scan once each under all-refs") {
    TempDir tmp;
    GitFixture repo(tmp.file("repo"));
    repo.write("f0.txt", "0\n");
    repo.commit("c0", kBase, kBase);
    for (int i = 1; i < 5; ++i) {
        repo.write("f" + std::to_string(i) + ".txt", "x\n");
        repo.commit("c" + std::to_string(i), kBase + i * 100, kBase + i * 100);
    }
    repo.branch("feature");
    repo.write("main-only.txt", "m\n");
    repo.commit("m1", kBase + 1000, kBase + 1000);
    repo.checkout("feature");
    for (int i = 0; i < 2; ++i) {
        repo.write("feat" + std::to_string(i) + ".txt", "f\n");
        repo.commit("f" + std::to_string(i), kBase + 2000 + i * 100, kBase + 2000 + i * 100);
    }

    // oracle: git's own reachability count
    size_t expected_all = repo.rev_list_count("--all");
    CHECK(expected_all == 8);

    auto all_refs = collect(repo.dir(), {});
    CHECK(all_refs.size() == expected_all);

    ScanConfig head_only;
    head_only.branches = BranchPolicy::DefaultBranch;
    auto head = collect(repo.dir(), head_only);
    CHECK(head.size() == repo.rev_list_count("HEAD"));
    CHECK(head.size() == 7);  // feature is checked out: 5 shared + 2 own
}

TEST_CASE("date filtering respects the configured field") {
    TempDir tmp;
    GitFixture repo(tmp.file("repo"));
    repo.write("a.txt", "a\n");
    repo.commit("early", kBase - 5000, kBase + 1000);
    repo.write("b.txt", "b\n");
    repo.commit("late", kBase + 9000, kBase + 2000);

    ScanConfig by_committer;
    by_committer.since = kBase + 1500;
    ScanReport report;
    auto committer_filtered = collect(repo.dir(), by_committer, &report);
    REQUIRE(committer_filtered.size() == 1);
    CHECK(committer_filtered[0].message == "late\n");
    CHECK(report.filtered == 1);

    ScanConfig by_author;
    by_author.date_field = DateField::Author;
    by_author.since = kBase;
    auto author_filtered = collect(repo.dir(), by_author);
    REQUIRE(author_filtered.size() == 1);
    CHECK(author_filtered[0].message == "late\n");

    ScanConfig window;
    window.since = kBase;
    window.until = kBase + 1500;
    auto windowed = collect(repo.dir(), window);
    REQUIRE(windowed.size() == 1);
    CHECK(windowed[0].message == "early\n");
}

TEST_CASE("unreadable paths raise ScanError") {
    TempDir tmp;
    CHECK_THROWS_AS(collect(tmp.file("missing"), {}), ScanError);
    tmp.write("plain/file.txt", "not a repo\n");
    CHECK_THROWS_AS(collect(tmp.file("plain"), {}), ScanError);
}

TEST_CASE("empty repository yields nothing") {
    TempDir tmp;
    GitFixture repo(tmp.file("repo"));
    auto records = collect(repo.dir(), {});
    CHECK(records.empty());

    ScanConfig head_only;
    head_only.branches = BranchPolicy::DefaultBranch;
    CHECK(collect(repo.dir(), head_only).empty());
}

TEST_CASE("root listing covers files and directories, top level only") {
    TempDir tmp;
    GitFixture repo(tmp.file("repo"));
    repo.write("setup.py", "x\n");
    repo.write("src/deep/nested.js", "x\n");
    repo.write("docs/readme.md", "x\n");
    repo.commit("tree shape", kBase, kBase);

    auto records = collect(repo.dir(), {});
    REQUIRE(records.size() == 1);
    CHECK(records[0].root_entries == RootListing{"docs", "setup.py", "src"});
}

TEST_CASE("export write/read round trip") {
    CommitRecord original;
    original.repo_id = "demo";
    original.commit_id = "abc123def4560000000000000000000000000000";
    original.author_date = kBase + 1;
    original.committer_date = kBase + 2;
    original.message = "Fix CVE-2018-0001\n\nWith a second, longer paragraph.\n";
    original.root_entries = {"setup.py", "docs"};

    std::ostringstream out;
    write_export_header(out);
    write_export_record(out, original);

    std::istringstream in(out.str());
    std::vector<CommitRecord> read_back;
    auto report = read_export(in, [&](CommitRecord&& c) { read_back.push_back(std::move(c)); });
    CHECK(report.records == 1);
    CHECK(report.skipped == 0);
    REQUIRE(read_back.size() == 1);
    CHECK(read_back[0] == original);
}

TEST_CASE("export reader skips defect lines and counts them") {
    std::string data =
        R"({"repo":"r","id":"aa00","author_date":"2018-01-01T00:00:00Z","committer_date":"2018-01-01T00:00:00Z","message":"ok","root":["setup.py"]})"
        "\n"
        "{this is not json}\n"
        R"({"repo":"r","id":"bb11","author_date":"2018-01-01T00:00:00Z","committer_date":"2018-01-01T00:00:00Z","message":"no root key"})"
        "\n"
        R"({"repo":"r","id":"cc22","author_date":"not a date","committer_date":"2018-01-01T00:00:00Z","message":"bad date","root":[]})"
        "\n";
    std::istringstream in(data);
    size_t records = 0;
    auto report = read_export(in, [&](CommitRecord&&) { ++records; });
    CHECK(records == 1);
    CHECK(report.records == 1);
    CHECK(report.skipped == 3);
    CHECK(report.lines == 4);
}

TEST_CASE("export reader accepts and rejects schema headers") {
    std::string good = kCommitsSchema.header_line() + "\n" +
        R"({"repo":"r","id":"aa00","author_date":"2018-01-01T00:00:00Z","committer_date":"2018-01-01T00:00:00Z","message":"ok","root":[]})" +
        "\n";
    std::istringstream in(good);
    size_t records = 0;
    auto report = read_export(in, [&](CommitRecord&&) { ++records; });
    CHECK(records == 1);
    CHECK(report.skipped == 0);

    std::istringstream future("{\"schema\":\"commits/9\"}\n");
    CHECK_THROWS(read_export(future, [](CommitRecord&&) {}));
}

TEST_CASE("scan output round trips through the export format") {
    TempDir tmp;
    GitFixture repo(tmp.file("repo"));
    repo.write("index.js", "x\n");
    repo.commit("one\n\nmulti line\n", kBase, kBase + 50);
    repo.write("other.txt", "y\n");
    repo.commit("two", kBase + 100, kBase + 150);

    std::vector<CommitRecord> scanned;
    scan_repository(repo.dir(), "roundtrip", {},
                    [&](CommitRecord&& c) { scanned.push_back(std::move(c)); });

    std::ostringstream out;
    write_export_header(out);
    for (const auto& record : scanned)
        write_export_record(out, record);

    std::istringstream in(out.str());
    std::vector<CommitRecord> read_back;
    read_export(in, [&](CommitRecord&& c) { read_back.push_back(std::move(c)); });
    CHECK(read_back == scanned);
}
