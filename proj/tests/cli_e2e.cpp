#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"

#ifndef SEMKIT_CLI_PATH
#error "SEMKIT_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "semkit_e2e";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
  REQUIRE(out.good());
}

RunResult run(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  fs::path err = work_dir() / "stderr.txt";
  std::string cmd = std::string(SEMKIT_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture(const std::string& name) {
  return testutil::data_path(name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("version and help succeed") {
    CHECK(run("--version").code == 0);
    RunResult help = run("--help");
    CHECK(help.code == 0);
    CHECK(help.out.find("ingest") != std::string::npos);
  }

  TEST_CASE("unknown flags and subcommands exit 1") {
    CHECK(run("frobnicate").code == 1);
    CHECK(run("ingest --no-such-flag").code == 1);
    CHECK(run("").code == 1);  // subcommand required
  }

  TEST_CASE("ingest validates conllu") {
    RunResult ok = run("ingest --input " + fixture("fixture.conllu"));
    CHECK(ok.code == 0);
    CHECK(ok.err.find("3 sentences") != std::string::npos);

    CHECK(run("ingest --input /nonexistent.conllu").code == 2);

    fs::path bad = work_dir() / "bad.conllu";
    spit(bad, "1\tnot\tenough\tcolumns\n");
    CHECK(run("ingest --input " + bad.string()).code == 1);
    // lenient mode shrugs it off
    RunResult lenient =
        run("ingest --lenient --input " + bad.string());
    CHECK(lenient.code == 0);
    CHECK(lenient.err.find("0 sentences") != std::string::npos);

    fs::path norm = work_dir() / "norm.conllu";
    CHECK(run("ingest --input " + fixture("fixture.conllu") + " --output " +
              norm.string())
              .code == 0);
    CHECK(slurp(norm).find("# sent_id = fig1") != std::string::npos);
  }

  TEST_CASE("dedup writes kept lines and a hit report") {
    fs::path train = work_dir() / "train.txt";
    fs::path dev = work_dir() / "dev.txt";
    spit(train, "abcdefgh\nzzzzzzzz\nabcdefgx\n");
    spit(dev, "abcdefgh\n");
    RunResult r = run("dedup --train " + train.string() + " --against " +
                      dev.string());
    CHECK(r.code == 0);
    CHECK(slurp(work_dir() / "train.txt.kept") == "zzzzzzzz\n");
    std::string report = slurp(work_dir() / "train.txt.hits.tsv");
    CHECK(report.find("train_line\teval_split\teval_line\tratio") == 0);
    CHECK(report.find("1\tdev\t1\t1.000000") != std::string::npos);
    CHECK(report.find("3\tdev\t1\t0.875000") != std::string::npos);

    // named split and explicit outputs
    fs::path kept = work_dir() / "clean.txt";
    fs::path hits = work_dir() / "hits.tsv";
    RunResult named =
        run("dedup --train " + train.string() + " --against heldout=" +
            dev.string() + " --output " + kept.string() + " --report " +
            hits.string() + " --jobs 3");
    CHECK(named.code == 0);
    CHECK(slurp(hits).find("\theldout\t") != std::string::npos);

    CHECK(run("dedup --train " + train.string() + " --against " +
              dev.string() + " --gamma 1.5")
              .code == 1);
    CHECK(run("dedup --train /nope.txt --against " + dev.string()).code == 2);
  }

  TEST_CASE("corrupt emits jsonl and tsv deterministically") {
    fs::path out1 = work_dir() / "c1.jsonl";
    fs::path out2 = work_dir() / "c2.jsonl";
    fs::path tsv = work_dir() / "c.tsv";
    std::string base = "corrupt --input " + fixture("fixture.conllu") +
                       " --seed 9 --rate 1.0";
    RunResult r1 = run(base + " --output " + out1.string() + " --tsv " +
                       tsv.string());
    CHECK(r1.code == 0);
    CHECK(r1.err.find("seed = 9") != std::string::npos);
    CHECK(run(base + " --output " + out2.string()).code == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(!slurp(out1).empty());

    // every tsv row is corrupted TAB source
    std::istringstream lines(slurp(tsv));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
      ++rows;
      CHECK(line.find('\t') != std::string::npos);
    }
    CHECK(rows > 0);

    CHECK(run(base + " --output " + out1.string() + " --weights 1,1").code ==
          1);
    CHECK(run(base + " --output " + out1.string() + " --rate 0").code == 1);
  }

  TEST_CASE("sample emits deterministic examples per task") {
    fs::path a = work_dir() / "dsp_a.jsonl";
    fs::path b = work_dir() / "dsp_b.jsonl";
    std::string base = "sample --input " + fixture("fixture.conllu") +
                       " --task dsp --seed 4 --pairs-per-sentence 3";
    CHECK(run(base + " --output " + a.string()).code == 0);
    CHECK(run(base + " --output " + b.string()).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("\"task\":\"DSP\"") != std::string::npos);

    fs::path drp = work_dir() / "drp.jsonl";
    CHECK(run("sample --input " + fixture("fixture.conllu") +
              " --task drp --seed 4 --output " + drp.string())
              .code == 0);
    CHECK(slurp(drp).find("\"task\":\"DRP\"") != std::string::npos);

    fs::path flip = work_dir() / "flip.jsonl";
    CHECK(run(base + " --output " + flip.string() +
              " --orientation flipped")
              .code == 0);
    CHECK(slurp(flip) != slurp(a));

    CHECK(run("sample --input " + fixture("fixture.conllu") +
              " --task nope --output " + a.string())
              .code == 1);
  }

  TEST_CASE("score m2 prints the headline metrics") {
    fs::path src = work_dir() / "src.txt";
    fs::path hyp = work_dir() / "hyp.txt";
    fs::path ref = work_dir() / "ref.m2";
    spit(src, "a b c d\n");
    spit(hyp, "a x c y\n");
    spit(ref,
         "S a b c d\n"
         "A 1 2|||confusion|||x|||REQUIRED|||-NONE-|||0\n"
         "\n");
    RunResult r = run("score m2 --source " + src.string() + " --hypothesis " +
                      hyp.string() + " --ref " + ref.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("TP = 1, FP = 1, FN = 0") != std::string::npos);
    CHECK(r.out.find("Precision = 50.0") != std::string::npos);
    CHECK(r.out.find("Recall    = 100.0") != std::string::npos);
    CHECK(r.out.find("F0.5      = 55.6") != std::string::npos);

    fs::path json = work_dir() / "m2.json";
    RunResult withjson =
        run("score m2 --source " + src.string() + " --hypothesis " +
            hyp.string() + " --ref " + ref.string() + " --json " +
            json.string() + " --detail");
    CHECK(withjson.code == 0);
    CHECK(withjson.out.find("id\ttp\tfp\tfn\tannotator") !=
          std::string::npos);
    CHECK(slurp(json).find("\"tp\": 1") != std::string::npos);

    // mismatched reference tokens are a validation error
    spit(ref, "S a b\n\n");
    CHECK(run("score m2 --source " + src.string() + " --hypothesis " +
              hyp.string() + " --ref " + ref.string())
              .code == 1);
  }

  TEST_CASE("score cls prints counts and per-type recall") {
    fs::path pred = work_dir() / "pred.tsv";
    fs::path gold = work_dir() / "gold.tsv";
    fs::path types = work_dir() / "types.tsv";
    spit(pred, "s1\tincorrect\ns2\tincorrect\ns3\tcorrect\ns4\tcorrect\n");
    spit(gold, "s1\tincorrect\ns2\tcorrect\ns3\tincorrect\ns4\tcorrect\n");
    spit(types, "s1\tmissing\ns3\tillogic\n");
    RunResult r = run("score cls --pred " + pred.string() + " --gold " +
                      gold.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("TP = 1, FP = 1, FN = 1, TN = 1") != std::string::npos);
    CHECK(r.out.find("Precision = 50.0") != std::string::npos);
    CHECK(r.out.find("F1        = 50.0") != std::string::npos);

    RunResult typed = run("score cls --pred " + pred.string() + " --gold " +
                          gold.string() + " --types " + types.string());
    CHECK(typed.code == 0);
    CHECK(typed.out.find("missing\t100.0") != std::string::npos);
    CHECK(typed.out.find("illogic\t0.0") != std::string::npos);

    spit(pred, "s1\tincorrect\n");
    CHECK(run("score cls --pred " + pred.string() + " --gold " +
              gold.string())
              .code == 1);
  }

  TEST_CASE("stats renders the labeled and pair tables") {
    fs::path labeled = work_dir() / "labeled.tsv";
    spit(labeled,
         "一二三四五六七八九十\tincorrect\n"
         "一二三四五六七八九十\tincorrect\n"
         "一二三四五六七八九十\tincorrect\n"
         "一二三四五六七八九十\tcorrect\n");
    RunResult r = run("stats --mode labeled --input " + labeled.string());
    CHECK(r.code == 0);
    CHECK(r.out ==
          "#Line\tAvg.Length\tError Ratio\n"
          "4\t10.0\t75.0%\n");

    fs::path pairs = work_dir() / "pairs.tsv";
    spit(pairs, "他 昨天 讨论 了 报告\t他 今天 讨论 了 报告\n");
    RunResult p = run("stats --mode pairs --input " + pairs.string());
    CHECK(p.code == 0);
    CHECK(p.out ==
          "#Line\tAvg.Length.S\tAvg.Length.T\tAvg.Edit\n"
          "1\t8.0\t8.0\t1.0\n");
    RunResult d =
        run("stats --mode pairs --detail --input " + pairs.string());
    CHECK(d.out.find("Avg.Edit.Char") != std::string::npos);
    CHECK(d.out.find("\t1.0\t1.0\n") != std::string::npos);

    spit(labeled, "sentence\tnot-a-label\n");
    CHECK(run("stats --mode labeled --input " + labeled.string()).code == 1);
  }

  TEST_CASE("probe trains on sampled examples") {
    fs::path examples = work_dir() / "probe.jsonl";
    CHECK(run("sample --input " + fixture("fixture.conllu") +
              " --task dsrp+ --seed 2 --output " + examples.string())
              .code == 0);
    fs::path model = work_dir() / "model.json";
    fs::path report = work_dir() / "report.tsv";
    RunResult r = run("probe --examples " + examples.string() + " --conllu " +
                      fixture("fixture.conllu") + " --epochs 5 --model " +
                      model.string() + " --report " + report.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("task\tlabel\tsupport\tcorrect\taccuracy") == 0);
    CHECK(r.out.find("DSP+") != std::string::npos);
    CHECK(r.out.find("DRP") != std::string::npos);
    std::string saved = slurp(model);
    CHECK(saved.find("\"classes\"") != std::string::npos);
    CHECK(slurp(report) == r.out);
  }

  TEST_CASE("config file sets defaults and rejects unknown keys") {
    fs::path train = work_dir() / "cfg_train.txt";
    fs::path dev = work_dir() / "cfg_dev.txt";
    spit(train, "abcdefgh\n");
    spit(dev, "abcdefgx\n");  // ratio 0.875
    fs::path cfg = work_dir() / "good.ini";
    spit(cfg, "[dedup]\ngamma = 0.9\n");
    // gamma 0.9 keeps the line that default 0.70 would remove
    RunResult r = run("--config " + cfg.string() + " dedup --train " +
                      train.string() + " --against " + dev.string());
    CHECK(r.code == 0);
    CHECK(slurp(work_dir() / "cfg_train.txt.kept") == "abcdefgh\n");

    fs::path bad = work_dir() / "bad.ini";
    spit(bad, "no_such_key = 1\n");
    CHECK(run("--config " + bad.string() + " dedup --train " +
              train.string() + " --against " + dev.string())
              .code == 1);
  }
}
