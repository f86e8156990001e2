#pragma once

// Five-permutation Ulam median via windowed block reconstruction.
//
// Pipeline: windowGrid -> per-block tuple enumeration -> blockReconstruction
// per tuple -> composeBlocks (DP over valid tuple sequences) -> postprocess.
// All positions are 1-based; windows are half-open [s, e).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rankagg/permutation.hpp"

namespace rankagg {

struct ReconstructParams {
  double epsilon = 0.5;
  double rho = 0.25;
  /// Upper bound on enumerated window tuples per block.
  std::size_t tupleCap = 1024;

  void validate() const;
};

/// Constants from the analysis. Documented only; the runtime defaults above
/// are the practical regime.
inline constexpr double kAnalysisRho = 0.000001;
inline constexpr double kAnalysisAlpha = 0.000007;

struct BlockLayout {
  std::size_t n = 0;
  std::size_t K = 0;  // block count
  std::size_t b = 0;  // nominal block size; K * b >= n
  double nEps = 1.0;  // n^epsilon as a real number

  /// First position of block j (1-based j).
  std::int32_t start(std::size_t j) const { return static_cast<std::int32_t>((j - 1) * b + 1); }
  /// True length of block j; only the last block can be shorter than b.
  std::int32_t length(std::size_t j) const;
};

BlockLayout blockLayout(std::size_t n, const ReconstructParams& params);

struct Window {
  std::int32_t s = 1;
  std::int32_t e = 1;
  std::int32_t size() const { return e - s; }
  friend bool operator==(const Window&, const Window&) = default;
  friend auto operator<=>(const Window&, const Window&) = default;
};

struct BlockWindows {
  /// Non-degenerate windows W_j ordered by deviation from the block's own
  /// interval, then (s, e).
  std::vector<Window> W;
  /// Degenerate windows [s, s) at the same start positions (SW_j), by s.
  std::vector<Window> SW;
};

struct WindowGrid {
  BlockLayout layout;
  std::vector<BlockWindows> blocks;  // blocks[j-1]
  /// Union of all SW_j, ascending by s.
  std::vector<Window> SW;
};

WindowGrid windowGrid(std::size_t n, const ReconstructParams& params);

using WindowTuple = std::array<Window, 5>;

/// A candidate window with its enumeration key.
struct RankedWindow {
  Window w;
  std::int64_t key = 0;
};

/// Per coordinate: W_j and the degenerate windows of SW, each sorted by key.
struct RankedLists {
  std::array<std::vector<RankedWindow>, 5> W;
  std::array<std::vector<RankedWindow>, 5> SW;
};

/// Ranks the windows of block j for each of the five permutations.
///
/// A window's key is its indel distance to `reference`, plus its
/// deviation |s - l_j| + |size - b_j| scaled below one unit of indel so it only
/// breaks ties. Remaining ties go by (s, e).
RankedLists rankWindows(const Instance& Q, const WindowGrid& grid, std::size_t j,
                        std::span<const Element> reference);

/// Reference texts for block j: the reconstruction of the block's own
/// interval, then each input's own block, without repeats.
std::vector<std::vector<Element>> referenceTexts(const Instance& Q, const WindowGrid& grid,
                                                 std::size_t j);
/// Same, from the five inputs' contents at the block's own positions.
std::vector<std::vector<Element>> referenceTexts(
    const std::array<std::span<const Element>, 5>& ownLines, std::size_t b);

/// Enumeration key of window w of block j at the given indel distance.
std::int64_t rankKey(std::int64_t indel, const Window& w, const BlockLayout& layout,
                     std::size_t j);
/// Sorts every list by (key, s, e).
void sortRanked(RankedLists& lists);

/// Lazily walks the window tuples of one block: W_j^5 together with the five
/// families that put a single degenerate window of SW at one coordinate.
///
/// Tuples come in increasing total key; ties go to the all-W family first,
/// then by the coordinate holding the degenerate window, then by the
/// coordinates' ranks in lexicographic order. Stops after `cap` tuples.
class TupleEnumerator {
 public:
  TupleEnumerator(RankedLists lists, std::size_t cap);

  /// Fills `out` and returns true, or returns false when exhausted or capped.
  bool next(WindowTuple& out);
  std::size_t produced() const noexcept { return produced_; }
  /// True once the cap stopped enumeration before every tuple was produced.
  bool truncated() const noexcept { return truncated_; }
  /// True when no tuple is left to produce.
  bool exhausted() const noexcept { return heap_.empty(); }

 private:
  struct Node {
    std::int64_t sum;
    std::uint8_t family;  // 0: all W; f > 0: coordinate f-1 degenerate
    std::array<std::uint32_t, 5> idx;
    std::uint8_t pivot;  // children only bump coordinates >= pivot
  };
  struct Later {
    bool operator()(const Node& a, const Node& b) const {
      if (a.sum != b.sum) return a.sum > b.sum;
      if (a.family != b.family) return a.family > b.family;
      return a.idx > b.idx;
    }
  };
  const std::vector<RankedWindow>& list(const Node& node, std::size_t c) const;

  RankedLists lists_;
  std::vector<Node> heap_;
  bool truncated_ = false;
  std::size_t cap_;
  std::size_t produced_ = 0;
};

/// Drains one enumerator per reference round-robin, skipping tuples already
/// taken, until `cap` tuples are collected or all are exhausted. Sets
/// `truncated` when some enumerator still had tuples left.
std::vector<WindowTuple> enumerateTuples(std::vector<RankedLists> perReference, std::size_t cap,
                                         bool* truncated = nullptr);

/// Majority-graph reconstruction of one block from five substrings.
/// Vertices: elements present in at least four strings. Pairs without a
/// strict majority are deleted (lexicographic scan), then triangles
/// (lexicographically first each time), and the topological order is padded
/// with kDummy up to length b.
std::vector<Element> blockReconstruction(const std::array<std::span<const Element>, 5>& group,
                                         std::size_t b);

/// Indel distance between a block text (dummies never match) and a sequence
/// of distinct elements.
std::int64_t contentIndel(std::span<const Element> text, std::span<const Element> content);
/// p[s, e) as a span.
std::span<const Element> windowContent(const Permutation& p, const Window& w);
/// contentIndel against the window p[s, e).
std::int64_t blockIndel(std::span<const Element> text, const Permutation& p, const Window& w);

struct CandidateBlock {
  std::size_t block = 0;  // j, 1-based
  std::vector<Element> text;
  WindowTuple windows;
  std::int64_t objective = 0;
};

/// Reconstructs and scores one tuple.
CandidateBlock makeCandidate(const Instance& Q, std::size_t j, const WindowTuple& windows,
                             std::size_t b);

struct Choice {
  std::size_t block;  // 1-based
  std::size_t index;  // into C[block-1]
};

struct CompositionResult {
  std::vector<Choice> chosen;
  std::int64_t blockEd = 0;
  /// K blocks; unchosen blocks are b dummies.
  std::vector<Element> intermediate;
};

/// Block composition DP without assembling the string; reads only windows
/// and objectives, so texts may be left empty.
CompositionResult composeChoices(const std::vector<std::vector<CandidateBlock>>& C,
                                 const BlockLayout& layout);

/// Block composition DP. Ties resolve to the first-found predecessor and
/// the first-found final tuple in (block, index) order.
CompositionResult composeBlocks(const std::vector<std::vector<CandidateBlock>>& C,
                                const BlockLayout& layout);

/// BlockED of an explicit valid sequence, evaluated term by term.
std::int64_t blockEdOf(const std::vector<std::vector<CandidateBlock>>& C,
                       const std::vector<Choice>& sequence, const BlockLayout& layout);

/// True when consecutive choices have increasing blocks and e' <= s on all
/// five coordinates.
bool isValidSequence(const std::vector<std::vector<CandidateBlock>>& C,
                     const std::vector<Choice>& sequence);

/// Drops leftmost dummies until n symbols remain, then fills the remaining
/// dummies left to right with the unused elements in ascending order.
Permutation postprocess(std::span<const Element> intermediate, std::size_t n);

struct ReconstructResult {
  Permutation output;
  CompositionResult composition;
  std::vector<std::size_t> tuplesPerBlock;
  std::vector<bool> truncated;
  BlockLayout layout;
};

ReconstructResult scalableMedianReconstruct(const Instance& Q, const ReconstructParams& params);

/// Candidate sets C_1..C_K, in enumeration order.
std::vector<std::vector<CandidateBlock>> buildCandidateSets(const Instance& Q,
                                                            const WindowGrid& grid,
                                                            std::size_t tupleCap,
                                                            std::vector<bool>* truncated = nullptr);

}  // namespace rankagg
