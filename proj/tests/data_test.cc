// Copyright 2026 The MVRE Authors.
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


#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mvre/data/corpus.h"
#include "mvre/data/encode.h"
#include "mvre/data/synth.h"
#include "mvre/data/synth_corpus.h"
#include "mvre/data/vocab.h"
#include "mvre/errors.h"
#include "mvre/numerics/random.h"

namespace mvre {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("mvre_data_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

CorpusPaths ToyFiles(const TempDir& dir) {
  WriteText(dir.File("rel.txt"), "NA\nborn_in\nlives_in\n");
  WriteText(dir.File("sent.jsonl"),
            R"({"head":"obama","tail":"hawaii","relation":"born_in","tokens":["obama","was","born","in","hawaii"],"head_pos":0,"tail_pos":4})"
            "\n"
            R"({"head":"obama","tail":"hawaii","relation":"born_in","tokens":["hawaii","is","where","obama","was","born"],"head_pos":3,"tail_pos":0})"
            "\n"
            R"({"head":"merkel","tail":"berlin","relation":"lives_in","tokens":["merkel","lives","in","berlin"],"head_pos":0,"tail_pos":3})"
            "\n");
  WriteText(dir.File("desc.jsonl"),
            R"({"entity":"obama","tokens":["barack","obama","is","a","politician"]})"
            "\n");
  WriteText(dir.File("types.jsonl"),
            R"({"entity":"obama","types":["/person","/person/politician"]})"
            "\n"
            R"({"entity":"hawaii","types":["/location"]})"
            "\n");
  return {dir.File("sent.jsonl"), dir.File("desc.jsonl"), dir.File("types.jsonl"),
          dir.File("rel.txt")};
}

TEST(LoadCorpus, ToyFileGroupsIntoTwoBags) {
  TempDir dir;
  RawCorpus corpus = LoadCorpus(ToyFiles(dir), BagGrouping::kByPairAndRelation);
  ASSERT_EQ(corpus.bags.size(), 2u);
  EXPECT_EQ(corpus.bags[0].head, "obama");
  EXPECT_EQ(corpus.bags[0].sentences.size(), 2u);
  EXPECT_EQ(corpus.bags[0].relation, 1);
  EXPECT_EQ(corpus.bags[1].relation, 2);
  EXPECT_EQ(corpus.stats.sentences, 3u);
  EXPECT_EQ(corpus.stats.pairs, 2u);
  EXPECT_EQ(corpus.stats.facts, 2u);
}

TEST(LoadCorpus, EmptySentencesFile) {
  TempDir dir;
  CorpusPaths paths = ToyFiles(dir);
  WriteText(paths.sentences, "");
  RawCorpus corpus = LoadCorpus(paths, BagGrouping::kByPairAndRelation);
  EXPECT_TRUE(corpus.bags.empty());
  EXPECT_EQ(corpus.stats.sentences, 0u);
  EXPECT_EQ(corpus.stats.pairs, 0u);
  EXPECT_EQ(corpus.stats.facts, 0u);
}

TEST(LoadCorpus, MalformedRecordReportsLine) {
  TempDir dir;
  CorpusPaths paths = ToyFiles(dir);
  WriteText(paths.sentences,
            R"({"head":"a","tail":"b","relation":"NA","tokens":["a","b"],"head_pos":0,"tail_pos":1})"
            "\n{not json\n");
  try {
    LoadCorpus(paths, BagGrouping::kByPairAndRelation);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, UnknownRelationAndBadPositionAreErrors) {
  TempDir dir;
  CorpusPaths paths = ToyFiles(dir);
  WriteText(paths.sentences,
            R"({"head":"a","tail":"b","relation":"founded","tokens":["a","b"],"head_pos":0,"tail_pos":1})"
            "\n");
  EXPECT_THROW(LoadCorpus(paths, BagGrouping::kByPairAndRelation), DataError);
  WriteText(paths.sentences,
            R"({"head":"a","tail":"b","relation":"NA","tokens":["a","b"],"head_pos":0,"tail_pos":2})"
            "\n");
  EXPECT_THROW(LoadCorpus(paths, BagGrouping::kByPairAndRelation), DataError);
}

TEST(LoadCorpus, PairGroupingCollectsGoldRelations) {
  std::vector<SentenceRecord> sentences = {
      {"a", "b", "r1", {"a", "b"}, 0, 1},
      {"a", "b", "r2", {"b", "a"}, 1, 0},
      {"a", "c", "NA", {"a", "c"}, 0, 1},
  };
  std::vector<std::string> relations = {"NA", "r1", "r2"};
  auto by_relation = GroupBags(sentences, relations, BagGrouping::kByPairAndRelation);
  EXPECT_EQ(by_relation.size(), 3u);
  auto by_pair = GroupBags(sentences, relations, BagGrouping::kByPair);
  ASSERT_EQ(by_pair.size(), 2u);
  EXPECT_EQ(by_pair[0].sentences.size(), 2u);
  EXPECT_EQ(by_pair[0].gold_relations, (std::vector<int>{1, 2}));
  EXPECT_TRUE(by_pair[1].gold_relations.empty());
}

TEST(BuildVocab, MinCountMapsRareWordsToUnknown) {
  RawCorpus corpus;
  corpus.relations = {"NA"};
  RawBag bag;
  bag.head = "a";
  bag.tail = "b";
  bag.sentences.push_back({"a", "b", "NA", {"a", "a", "a", "b"}, 0, 3});
  corpus.bags.push_back(bag);
  Vocabularies vocab = BuildVocab(corpus, 2);
  EXPECT_TRUE(vocab.words.Contains("a"));
  EXPECT_FALSE(vocab.words.Contains("b"));
  EXPECT_EQ(vocab.words.Lookup("b"), kUnknownWord);
  EXPECT_EQ(vocab.words.Lookup("a"), 2);
}

TEST(BuildVocab, FrequencyThenLexicographicOrder) {
  Vocabulary v({"<pad>", "<unk>"}, kUnknownWord);
  v.AddCounted({{"zeta", 2}, {"alpha", 2}, {"mid", 5}, {"rare", 1}}, 1);
  EXPECT_EQ(v.Token(2), "mid");
  EXPECT_EQ(v.Token(3), "alpha");
  EXPECT_EQ(v.Token(4), "zeta");
  EXPECT_EQ(v.Token(5), "rare");
}

TEST(BuildVocab, SavedFilesAreByteIdenticalAcrossRuns) {
  TempDir dir;
  CorpusPaths paths = ToyFiles(dir);
  for (const char* sub : {"run1", "run2"}) {
    fs::create_directories(dir.File(sub));
    RawCorpus corpus = LoadCorpus(paths, BagGrouping::kByPairAndRelation);
    SaveVocab(BuildVocab(corpus, 1), dir.File(sub));
  }
  for (const char* name : {"words.vocab", "types.vocab", "relations.vocab"}) {
    const std::string a = ReadText(dir.File(std::string("run1/") + name));
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, ReadText(dir.File(std::string("run2/") + name))) << name;
  }
  Vocabularies loaded = LoadVocab(dir.File("run1"));
  RawCorpus corpus = LoadCorpus(paths, BagGrouping::kByPairAndRelation);
  Vocabularies built = BuildVocab(corpus, 1);
  EXPECT_EQ(loaded.words.tokens(), built.words.tokens());
  EXPECT_EQ(loaded.types.tokens(), built.types.tokens());
  EXPECT_EQ(loaded.relations.tokens(), built.relations.tokens());
}

TEST(BuildVocab, MeanTypesPerEntity) {
  TempDir dir;
  RawCorpus corpus = LoadCorpus(ToyFiles(dir), BagGrouping::kByPairAndRelation);
  EXPECT_DOUBLE_EQ(corpus.stats.mean_types_per_entity, 1.5);
}

TEST(WordVectors, KnownRowsLoadedOthersUniform) {
  TempDir dir;
  WriteText(dir.File("vec.txt"), "2 3\nobama 1 2 3\nnotinvocab 4 5 6\n");
  Vocabulary words({"<pad>", "<unk>"}, kUnknownWord);
  words.AddCounted({{"obama", 1}, {"hawaii", 1}}, 1);
  Rng rng(3);
  size_t matched = 0;
  Matrix table = LoadWordVectors(dir.File("vec.txt"), words, 3, rng, &matched);
  EXPECT_EQ(matched, 1u);
  ASSERT_EQ(table.rows(), 3);
  ASSERT_EQ(table.cols(), words.size());
  const int obama = words.Lookup("obama");
  EXPECT_EQ(table(0, obama), 1.0);
  EXPECT_EQ(table(2, obama), 3.0);
  const int hawaii = words.Lookup("hawaii");
  for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(table(k, hawaii)), 0.1);
  WriteText(dir.File("bad.txt"), "obama 1 2\n");
  EXPECT_THROW(LoadWordVectors(dir.File("bad.txt"), words, 3, rng), DataError);
}

Vocabulary Words(const std::vector<std::string>& tokens) {
  std::unordered_map<std::string, size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  Vocabulary v({"<pad>", "<unk>"}, kUnknownWord);
  v.AddCounted(counts, 1);
  return v;
}

TEST(EncodeSentence, HeadTokenHasRelativePositionZero) {
  EncodingConfig config;
  SentenceRecord s{"obama", "hawaii", "born_in", {"obama", "was", "born", "in", "hawaii"}, 0, 4};
  Vocabulary words = Words(s.tokens);
  EncodedSentence e = EncodeSentence(s, words, config);
  EXPECT_EQ(e.head_positions[0] - config.max_distance, 0);
  EXPECT_EQ(e.tail_positions[4] - config.max_distance, 0);
  EXPECT_EQ(e.head_positions[4] - config.max_distance, 4);
  EXPECT_EQ(e.tail_positions[0] - config.max_distance, -4);
  EXPECT_EQ(e.length, 5);
  EXPECT_EQ(e.tokens.size(), 120u);
  for (int i = 5; i < 120; ++i) {
    EXPECT_EQ(e.tokens[i], kPadWord);
    EXPECT_EQ(e.head_positions[i], config.position_pad());
  }
}

TEST(EncodeSentence, LongSentenceTruncatedTo120) {
  EncodingConfig config;
  SentenceRecord s;
  for (int i = 0; i < 130; ++i) s.tokens.push_back("t" + std::to_string(i));
  s.head_pos = 0;
  s.tail_pos = 125;
  Vocabulary words = Words(s.tokens);
  EncodedSentence e = EncodeSentence(s, words, config);
  EXPECT_EQ(e.tokens.size(), 120u);
  EXPECT_EQ(e.length, 120);
  EXPECT_EQ(e.tokens[119], words.Lookup("t119"));
  // Distances are clipped to the configured range.
  EXPECT_EQ(e.tail_positions[0], 0);
  EXPECT_EQ(e.head_positions[119], 2 * config.max_distance);
}

TEST(EncodeSentence, RoundTripUpToTruncationAndUnknowns) {
  EncodingConfig config;
  config.seq_len = 6;
  SentenceRecord s{"a", "b", "NA", {"a", "x", "b", "y", "a", "b", "a", "x"}, 0, 2};
  Vocabulary words = Words({"a", "b", "x"});
  EncodedSentence e = EncodeSentence(s, words, config);
  EXPECT_EQ(DecodeTokens(e.tokens, e.length, words),
            (std::vector<std::string>{"a", "x", "b", "<unk>", "a", "b"}));
}

TEST(EncodeDescription, EntityPositionAndFallback) {
  EncodingConfig config;
  Vocabulary words = Words({"barack", "obama", "is"});
  EncodedDescription d =
      EncodeDescription({"barack", "obama", "is"}, "obama", words, config);
  EXPECT_EQ(d.positions[1], config.max_distance);
  EncodedDescription none = EncodeDescription({"is", "a"}, "obama", words, config);
  EXPECT_EQ(none.positions[0], config.max_distance);
  EXPECT_EQ(SurfaceTokens("new_york city"), (std::vector<std::string>{"new", "york", "city"}));
}

TEST(EncodeTypeSet, TwentyTypesGiveReproducibleSubset) {
  EncodingConfig config;
  config.seed = 17;
  std::vector<std::string> types;
  std::unordered_map<std::string, size_t> counts;
  for (int i = 0; i < 20; ++i) {
    types.push_back("/t" + std::to_string(i));
    counts[types.back()] = 1;
  }
  Vocabulary vocab({"<null>"}, -1);
  vocab.AddCounted(counts, 1);
  EncodedTypeSet a = EncodeTypeSet(types, "e", vocab, config);
  EncodedTypeSet b = EncodeTypeSet(types, "e", vocab, config);
  EXPECT_EQ(a.types, b.types);
  ASSERT_EQ(a.types.size(), 15u);

  // Replay the sampler independently.
  Rng replay = Rng::Derive(17, std::string("types\te"));
  std::vector<int> keep = replay.Sample(20, 15);
  for (int k = 0; k < 15; ++k) EXPECT_EQ(a.types[k], vocab.Lookup(types[keep[k]]));
  std::set<int> distinct(a.types.begin(), a.types.end());
  EXPECT_EQ(distinct.size(), 15u);
  EXPECT_EQ(distinct.count(kNullType), 0u);
}

TEST(EncodeTypeSet, ShortSetsArePaddedWithNull) {
  EncodingConfig config;
  Vocabulary vocab({"<null>"}, -1);
  vocab.AddCounted({{"/a", 1}, {"/b", 1}}, 1);
  EncodedTypeSet e = EncodeTypeSet({"/b", "/unknown", "/a"}, "x", vocab, config);
  ASSERT_EQ(e.types.size(), 15u);
  EXPECT_EQ(e.types[0], vocab.Lookup("/b"));
  EXPECT_EQ(e.types[1], vocab.Lookup("/a"));
  for (int k = 2; k < 15; ++k) EXPECT_EQ(e.types[k], kNullType);
}

TEST(EncodeCorpus, MissingDescriptionUsesSurfaceNameAndSamplesRoundTrip) {
  TempDir dir;
  RawCorpus corpus = LoadCorpus(ToyFiles(dir), BagGrouping::kByPairAndRelation);
  Vocabularies vocab = BuildVocab(corpus, 1);
  EncodingConfig config;
  auto samples = EncodeCorpus(corpus, vocab, config);
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_EQ(samples[0].bag.size(), 2u);
  EXPECT_EQ(samples[1].head, "merkel");
  EXPECT_EQ(samples[1].head_description.length, 1);
  EXPECT_EQ(samples[1].head_description.tokens[0], vocab.words.Lookup("merkel"));
  for (const auto& s : samples) {
    EXPECT_EQ(s.head_description.tokens.size(), 120u);
    EXPECT_EQ(s.head_types.types.size(), 15u);
  }
  SaveSamples(dir.File("enc.jsonl"), samples);
  auto loaded = LoadSamples(dir.File("enc.jsonl"));
  ASSERT_EQ(loaded.size(), samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(loaded[i].bag.size(), samples[i].bag.size());
    EXPECT_EQ(loaded[i].bag[0].tokens, samples[i].bag[0].tokens);
    EXPECT_EQ(loaded[i].bag[0].tail_positions, samples[i].bag[0].tail_positions);
    EXPECT_EQ(loaded[i].tail_types.types, samples[i].tail_types.types);
    EXPECT_EQ(loaded[i].relation, samples[i].relation);
  }
}

TEST(EncodeCorpus, LargeBagsAreCapped) {
  RawCorpus corpus;
  corpus.relations = {"NA"};
  RawBag bag;
  bag.head = "a";
  bag.tail = "b";
  for (int i = 0; i < 30; ++i) {
    bag.sentences.push_back({"a", "b", "NA", {"a", "w" + std::to_string(i), "b"}, 0, 2});
  }
  corpus.bags.push_back(bag);
  Vocabularies vocab = BuildVocab(corpus, 1);
  EncodingConfig config;
  config.bag_cap = 10;
  auto a = EncodeCorpus(corpus, vocab, config);
  auto b = EncodeCorpus(corpus, vocab, config);
  ASSERT_EQ(a[0].bag.size(), 10u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a[0].bag[i].tokens, b[0].bag[i].tokens);
}

TEST(SynthGenerate, ZeroNoiseGivesExactLinearViews) {
  SynthConfig config;
  config.n_samples = 50;
  config.noise = {0.0, 0.0, 0.0};
  SynthDataset data = SynthGenerate(config);
  for (const auto& s : data.samples) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ((s.views[j] - data.maps[j] * s.latent).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(SynthGenerate, SameSeedSameDataset) {
  SynthConfig config;
  config.n_samples = 100;
  SynthDataset a = SynthGenerate(config);
  SynthDataset b = SynthGenerate(config);
  for (size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].label, b.samples[i].label);
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(a.samples[i].views[j] == b.samples[i].views[j]);
  }
  config.seed = 2;
  SynthDataset c = SynthGenerate(config);
  EXPECT_FALSE(c.samples[0].views[0] == a.samples[0].views[0]);
}

TEST(SynthGenerate, InvalidConfigRejected) {
  SynthConfig config;
  config.n_relations = 1;
  EXPECT_THROW(SynthGenerate(config), ConfigError);
  config = SynthConfig();
  config.noise[1] = -1.0;
  EXPECT_THROW(SynthGenerate(config), ConfigError);
}

TEST(SynthGenerate, RecoveryFromViewsTwoAndThreeBeatsNoisyViewOne) {
  SynthConfig config;
  config.n_samples = 400;
  config.d_x = 8;
  config.d_view = 8;
  config.noise = {0.3, 0.3, 0.3};
  config.inflate_fraction = 0.5;
  config.inflate_factor = 10.0;
  config.inflate_view = 0;
  SynthDataset data = SynthGenerate(config);
  Eigen::MatrixXd stacked(16, 8);
  stacked << data.maps[1], data.maps[2];
  auto solve23 = stacked.colPivHouseholderQr();
  auto solve1 = data.maps[0].colPivHouseholderQr();
  double mse23 = 0.0, mse1 = 0.0;
  for (const auto& s : data.samples) {
    Eigen::VectorXd v23(16);
    v23 << s.views[1], s.views[2];
    mse23 += (solve23.solve(v23) - s.latent).squaredNorm();
    mse1 += (solve1.solve(s.views[0]) - s.latent).squaredNorm();
  }
  EXPECT_LT(mse23, mse1);
}

TEST(SynthGenerate, EmpiricalNoiseVarianceMatchesConfig) {
  SynthConfig config;
  config.n_samples = 10000;
  config.noise = {0.2, 0.5, 1.0};
  config.inflate_fraction = 0.0;
  SynthDataset data = SynthGenerate(config);
  for (int j = 0; j < 3; ++j) {
    double sum = 0.0, sq = 0.0;
    long n = 0;
    for (const auto& s : data.samples) {
      Eigen::VectorXd e = s.views[j] - data.maps[j] * s.latent;
      sum += e.sum();
      sq += e.squaredNorm();
      n += e.size();
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    const double target = config.noise[j] * config.noise[j];
    EXPECT_NEAR(var / target, 1.0, 0.05) << "view " << j;
  }
}

TEST(SynthGenerate, SaveLoadRoundTripIsExact) {
  TempDir dir;
  SynthConfig config;
  config.n_samples = 20;
  SynthDataset data = SynthGenerate(config);
  SaveSynthetic(dir.File("s.jsonl"), data.samples);
  auto loaded = LoadSynthetic(dir.File("s.jsonl"));
  ASSERT_EQ(loaded.size(), 20u);
  for (size_t i = 0; i < loaded.size(); ++i) {
    EXPECT_EQ(loaded[i].label, data.samples[i].label);
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(loaded[i].views[j] == data.samples[i].views[j]);
  }
}

TEST(GenerateCorpus, IngestibleAndDeterministic) {
  TempDir dir;
  CorpusSynthConfig config;
  config.train_facts = 200;
  config.test_facts = 50;
  SynthCorpus corpus = GenerateCorpus(config);
  WriteSynthCorpus(corpus, dir.File("c1"));
  WriteSynthCorpus(GenerateCorpus(config), dir.File("c2"));
  EXPECT_EQ(ReadText(dir.File("c1/train.jsonl")), ReadText(dir.File("c2/train.jsonl")));
  CorpusPaths paths{dir.File("c1/train.jsonl"), dir.File("c1/descriptions.jsonl"),
                    dir.File("c1/types.jsonl"), dir.File("c1/relations.txt")};
  RawCorpus raw = LoadCorpus(paths, BagGrouping::kByPairAndRelation);
  EXPECT_EQ(raw.stats.facts, 200u);
  EXPECT_EQ(raw.relations.size(), 11u);
  const double with_desc =
      static_cast<double>(raw.stats.entities_with_description) / corpus.types.size();
  EXPECT_NEAR(with_desc, 0.64, 0.06);
}

}  // namespace
}  // namespace mvre
