#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kcsim/cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using kcsim::oracle::data_path;
using kcsim::oracle::slurp;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = kcsim::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("kcsim_cli_" + tag)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("compress") {
  const auto s1 = data_path("table1/s1.bits");
  auto r = run({"compress", s1});
  CHECK(r.code == 0);
  CHECK(first_line(r.out) == "34 40 0.85");
  CHECK(r.out.find("C(w) = k1k2k1k3k1k4k5k6k5k5") != std::string::npos);
  CHECK(r.out.find("k6=1010") != std::string::npos);

  CHECK(first_line(run({"compress", s1, "--keys", data_path("table1/s2.keys")}).out) ==
        "30 40 0.75");
  CHECK(first_line(run({"compress", s1, "--keys", data_path("table1/s3.keys"), "--share-by",
                        "symbol"}).out) == "22 40 0.55");
  CHECK(first_line(run({"compress", data_path("table1/s3.bits"), "--keys",
                        data_path("table1/s3.keys"), "--key-mode", "declared"}).out) ==
        "24 32 0.75");

  TempDir tmp("compress");
  r = run({"compress", tmp.file("empty.bits", "")});
  CHECK(r.code == 2);
  CHECK(r.err.find("empty bitstring") != std::string::npos);
  CHECK(run({"compress", tmp.file("odd.bits", "010")}).code == 2);
  CHECK(run({"compress", tmp / "missing.bits"}).code == 2);
  CHECK(first_line(run({"compress", tmp.file("raw.bin", "M"), "--bytes"}).out) == "10 8 1.25");
  CHECK(run({"compress", s1, "--key-mode", "guess"}).code == 2);
}

TEST_CASE("sim over hit tables") {
  const std::string google = "table:" + data_path("hits/horse_rider_google.csv");
  auto r = run({"sim", "--provider", google, "--kind", "metric-m", "horse", "rider"});
  CHECK(r.code == 0);
  CHECK(r.out == "f_x=150000000 f_y=57000000 f_xy=12400000 metric-m=0.889187\n");

  r = run({"sim", "--provider", google, "--kind", "ngd", "horse", "rider"});
  CHECK(r.code == 4);
  CHECK(r.out.empty());
  CHECK(r.err.find("N required") != std::string::npos);
  CHECK(run({"sim", "--provider", google, "--kind", "ngd", "--ngd-n", "8058044651", "horse",
             "rider"}).out.find("ngd=0.503484") != std::string::npos);

  r = run({"sim", "--provider", "table:" + data_path("hits/horse_rider_ngd_example.csv"),
           "--kind", "ngd", "horse", "rider"});
  CHECK(r.code == 0);
  CHECK(r.out.find("N=8058044651 ngd=0.44") != std::string::npos);

  CHECK(run({"sim", "--provider", google, "--kind", "dice", "horse", "saddle"}).code == 3);
  CHECK(run({"sim", "--provider", "table:/nonexistent.csv", "--kind", "dice", "a", "b"}).code ==
        5);
  CHECK(run({"sim", "--provider", "ftp:x", "--kind", "dice", "a", "b"}).code == 2);
  CHECK(run({"sim", "--kind", "dice", "a", "b"}).code == 2);
  CHECK(run({"sim", "--provider", google, "--kind", "cosine", "a", "b"}).code == 2);
}

TEST_CASE("sim over bitstring files") {
  const auto r = run({"sim", "--kind", "ncd", data_path("table1/s1.bits"),
                      data_path("table1/s2.bits")});
  CHECK(r.code == 0);
  CHECK(r.out == "C(x)=34 C(y)=20 C(x|y)=30 ncd=0.294118\n");
  CHECK(run({"sim", "--kind", "nid", data_path("table1/s1.bits"), data_path("table1/s2.bits")})
            .out.find("nid=") != std::string::npos);
}

TEST_CASE("index and sim over a saved index") {
  TempDir tmp("index");
  const auto first = tmp / "first.idx";
  const auto second = tmp / "second.idx";
  auto r = run({"index", data_path("toy_corpus"), "--out", first});
  CHECK(r.code == 0);
  CHECK(r.out == "docs=3 vocab=8 omega=13 psi=24\n");
  CHECK(run({"index", data_path("toy_corpus.jsonl"), "--out", second}).code == 0);
  CHECK(slurp(first) == slurp(second));

  r = run({"sim", "--provider", "index:" + first, "--kind", "nsd", "k1", "k5"});
  CHECK(r.code == 0);
  CHECK(r.out == "f_x=3 f_y=2 f_xy=2 N=3 nsd=0.000000\n");

  CHECK(run({"index", data_path("toy_corpus"), "--omega", "vocabulary-size"}).out ==
        "docs=3 vocab=8 omega=8 psi=24\n");
  fs::create_directories(tmp.path() / "empty");
  CHECK(run({"index", tmp / "empty"}).code == 2);
  CHECK(run({"index", tmp / "missing"}).code == 2);
  CHECK(run({"sim", "--provider", "index:" + tmp.file("bad.idx", "junk"), "--kind", "dice",
             "k1", "k5"}).code == 5);
}

TEST_CASE("matrix and cluster") {
  TempDir tmp("matrix");
  const auto idx = tmp / "toy.idx";
  REQUIRE(run({"index", data_path("toy_corpus"), "--out", idx}).code == 0);
  const auto out_dir = tmp / "out";

  auto r = run({"matrix", data_path("objects/toy_terms.csv"), "--provider", "index:" + idx,
                "--kind", "metric-m", "--out", out_dir, "--format", "values"});
  CHECK(r.code == 0);
  for (const char* name : {"values.tsv", "categories.tsv", "legend.txt", "provenance.tsv"}) {
    CHECK(fs::exists(fs::path(out_dir) / name));
  }
  CHECK(r.out == slurp(out_dir + "/values.tsv"));
  CHECK(r.out.rfind("\tk1\tk5\tk8\nk1\t\t", 0) == 0);
  CHECK(r.err.find("cells=6") != std::string::npos);

  r = run({"matrix", data_path("objects/toy_terms.csv"), "--provider", "index:" + idx,
           "--kind", "metric-m", "--out", out_dir, "--threads", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(out_dir + "/categories.tsv"));

  r = run({"cluster", out_dir + "/values.tsv", "--linkage", "average", "--k", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("group k1,k5,k8") != std::string::npos);

  const auto single = tmp.file("single.csv", "id,display_name\nk1,k1\n");
  r = run({"matrix", single, "--provider", "index:" + idx, "--kind", "dice", "--out", out_dir});
  CHECK(r.code == 2);
  CHECK(r.err.find("need >= 2 objects") != std::string::npos);

  const auto unknown = tmp.file("unknown.csv", "id,display_name\nk1,k1\nzz,no such term\n");
  r = run({"matrix", unknown, "--provider", "index:" + idx, "--kind", "metric-m", "--out",
           out_dir});
  CHECK(r.code == 0);
  CHECK(r.err.find("flagged") != std::string::npos);

  const auto table = tmp.file("t.csv", "term_x,term_y,f_x,f_y,f_xy\nq,r,1,1,1\n");
  CHECK(run({"matrix", data_path("objects/toy_terms.csv"), "--provider", "table:" + table,
             "--kind", "dice", "--out", out_dir}).code == 5);
  CHECK(run({"matrix", data_path("objects/toy_terms.csv"), "--provider", "index:" + idx,
             "--kind", "ncd", "--out", out_dir}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
