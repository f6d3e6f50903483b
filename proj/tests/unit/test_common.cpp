// Copyright 2026 The D3 Authors.
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

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <stdexcept>

#include "d3/common/digest.hpp"
#include "d3/common/error.hpp"
#include "d3/common/parallel.hpp"
#include "d3/common/rng.hpp"

using namespace d3;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, Mt19937KnownValue) {
  // The standard pins the 10000th output of a default-seeded mt19937_64.
  Rng r(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = r.next();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, Uniform01Range) {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, BelowCoversRangeUniformly) {
  Rng r(7);
  std::vector<int> hist(6, 0);
  for (int i = 0; i < 60000; ++i) ++hist[r.below(6)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Rng, ChooseIsSortedDistinctAndClamped) {
  Rng r(3);
  for (std::size_t n = 0; n < 12; ++n) {
    for (std::size_t k = 0; k < 14; ++k) {
      auto c = r.choose(n, k);
      EXPECT_EQ(c.size(), std::min(n, k));
      EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
      EXPECT_EQ(std::set<std::size_t>(c.begin(), c.end()).size(), c.size());
      for (auto x : c) EXPECT_LT(x, n);
    }
  }
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(11);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  r.shuffle(w);
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Rng, WeightedNeverPicksZeroWeight) {
  Rng r(5);
  for (int i = 0; i < 1000; ++i) EXPECT_NE(r.weighted({1.0, 0.0, 2.0}), 1u);
}

TEST(Seeds, DeriveIsPureAndLabelSensitive) {
  EXPECT_EQ(derive_seed(17, "diversify/0/1/2"), derive_seed(17, "diversify/0/1/2"));
  EXPECT_NE(derive_seed(17, "diversify/0/1/2"), derive_seed(17, "diversify/0/1/3"));
  EXPECT_NE(derive_seed(17, "a"), derive_seed(18, "a"));
  EXPECT_NE(derive_seed(17, std::uint64_t{1}), derive_seed(17, std::uint64_t{2}));
}

TEST(Seeds, Fnv1aKnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Parallel, WritesEverySlotForAnyJobCount) {
  for (std::size_t jobs : {1u, 2u, 8u, 64u}) {
    std::vector<int> out(1000, -1);
    parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
    for (std::size_t i = 0; i < out.size(); ++i) ASSERT_EQ(out[i], static_cast<int>(i * i % 97));
  }
}

TEST(Parallel, MapPreservesOrder) {
  std::vector<int> in(257);
  std::iota(in.begin(), in.end(), 0);
  auto out = parallel_map(in, 8, [](int x) { return x * 2; });
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(out[i], in[i] * 2);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Parallel, EmptyRangeIsNoop) {
  std::atomic<int> calls{0};
  parallel_for(0, 4, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls.load(), 0);
}

TEST(Digest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Errors, MessagesCarryLineAndKey) {
  ParseError p("bad", 3);
  EXPECT_EQ(p.line(), 3u);
  EXPECT_STREQ(p.what(), "line 3: bad");
  ValidationError v("out of range", "diversify.alpha");
  EXPECT_EQ(v.key(), "diversify.alpha");
  EXPECT_STREQ(v.what(), "diversify.alpha: out of range");
}
