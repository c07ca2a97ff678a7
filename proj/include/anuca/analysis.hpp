#pragma once

#include <optional>
#include <variant>

#include "anuca/engine.hpp"
#include "anuca/rng.hpp"

namespace anuca {

// Certificates are self-contained: each refutation can be replayed through
// the engine without rerunning the search that found it. Inconclusive
// results carry the exhausted bound.

struct CollisionAsymptotic {
    Pattern a, b;            // differ inside the core window
    Symbol background;       // both extend by this symbol
    CellSet compare_window;  // images agree here, hence everywhere
    Cell differs_at;
    int radius;
};

struct CollisionPeriodic {
    Box box;
    Pattern a, b;       // over the box cells; images under the periodized map agree
    Cell differs_at;
    // true when the configuration is constant on every congruence class mod
    // the box, so the periodic lifts collide as genuine configurations
    bool lift_genuine;
};

struct MissingImagePattern {
    CellSet window;
    Pattern missing;
    int radius;
};

struct InverseSynthesized {
    CellSet memory;
    std::shared_ptr<const RuleConfig> inverse;
    int radius;  // neighborhood radius at which synthesis succeeded
};

struct PsiBijection {
    Box box;
    std::uint64_t size;
    std::uint64_t digest;  // FNV over the forward table
    std::shared_ptr<const std::vector<std::uint64_t>> inverse;
};

struct LiftCase {
    Pattern x;       // sampled input over the probe window
    Symbol flip_to;  // image flipped at the probed cell
    Pattern z;       // replacement symbols over the translated neighborhood
};

struct LiftWitness {
    Cell cell;
    CellSet neighborhood;
    int window_radius;
    Symbol background;
    std::vector<LiftCase> cases;
    std::string note;
};

struct LiftFailure {
    Cell cell;
    CellSet neighborhood;
    Pattern x;
    Symbol flip_to;
    int window_radius;
    Symbol background;
    std::string note;
};

struct Inconclusive {
    int bound;
    std::string note;
};

using CertificatePayload =
    std::variant<CollisionAsymptotic, CollisionPeriodic, MissingImagePattern,
                 InverseSynthesized, PsiBijection, LiftWitness, LiftFailure,
                 Inconclusive>;

struct Certificate {
    CertificatePayload payload;

    std::string kind() const;
    bool is_refutation() const;

    template <class T>
    const T* as() const {
        return std::get_if<T>(&payload);
    }
};

// Exact image of the induced map on a window, by exhaustive enumeration.
struct ImageWindow {
    CellSet window;
    int alphabet = 2;
    std::uint64_t total = 0;  // q^{|window|}
    std::uint64_t count = 0;
    std::vector<bool> present;  // indexed by pattern code
    std::optional<std::uint64_t> first_missing;

    bool deficient() const { return count < total; }
};

ImageWindow image_window(const RuleConfig& s, const CellSet& window,
                         const Limits& limits = {});

// Scans centered boxes of growing radius for a pattern outside the image.
// Complete for non-surjectivity; never certifies surjectivity.
Certificate surjectivity_deficit(const RuleConfig& s, int max_radius,
                                 const Limits& limits = {});

// Exact collision search: (a) pairs of asymptotic configurations that agree
// outside a core box and share an image, per background symbol; (b) for
// configurations constant on congruence classes, collisions of the
// periodized maps, which lift to genuine periodic collisions. Deterministic
// lexicographic order; the first certificate wins.
Certificate collision_search(const RuleConfig& s, int max_radius,
                             std::vector<Symbol> backgrounds = {},
                             const Limits& limits = {});

struct StableInjectivityEntry {
    std::string label;
    RuleConfig config;
    Certificate certificate;
};

struct StableInjectivityReport {
    bool refuted = false;
    int max_radius = 0;
    std::vector<StableInjectivityEntry> entries;

    std::string verdict() const;
};

// Collision search on s and on every limit point of its orbit closure;
// translates reduce to s itself.
StableInjectivityReport stable_injectivity_check(const RuleConfig& s, int max_radius,
                                                 const Limits& limits = {});

// Smallest r <= max_radius such that the image on g + [-r,r]^d pins down the
// input at g, over all inputs on the window's memory domain.
std::optional<int> min_determining_radius(const RuleConfig& s, const Cell& g,
                                          int max_radius, const Limits& limits = {});

// Builds a left inverse with neighborhood [-r,r]^d, one table per view
// class, unique-preimage entries where the image realizes the pattern and
// symbol 0 elsewhere. The result's memory is trimmed to the offsets the
// tables actually read. Verified on 100 random windows before returning.
Certificate synthesize_inverse(const RuleConfig& s, int max_radius,
                               const Limits& limits = {}, std::uint64_t seed = 0);

// True iff compose(t, s) acts as the identity on `trials` random windows of
// the given radius (exact on each window).
bool verify_left_inverse(const RuleConfig& t, const RuleConfig& s, int trials,
                         int window_radius, std::uint64_t seed = 0,
                         const Limits& limits = {});

// True iff every cell of the exterior E-boundary of K carries the same rule
// as its reduction into K.
bool wrap_compatibility(const RuleConfig& s, const Box& k, const CellSet& e);

// Materializes the periodized map on A^K and decides bijectivity.
Certificate psi_invertibility_check(const RuleConfig& s, const Box& k,
                                    const Limits& limits = {});

// Desk-scale post-surjectivity probe at one cell: sample inputs, flip the
// image at the cell, and search for a lift supported on cell + neighborhood.
Certificate post_surjectivity_lift(const RuleConfig& s, const Cell& cell,
                                   const CellSet& neighborhood, int trials,
                                   int window_radius, Symbol background,
                                   std::uint64_t seed = 0, const Limits& limits = {});

std::optional<int> uniform_post_surjectivity_radius(
    const RuleConfig& s, const std::vector<Cell>& cells, int max_radius, int trials,
    int window_radius, Symbol background, std::uint64_t seed = 0,
    const Limits& limits = {});

// Eventually periodic configuration of Z: left cycle, finite middle, right
// cycle.
struct EventuallyPeriodic {
    std::vector<Symbol> left_cycle;
    Coord middle_lo = 0;
    std::vector<Symbol> middle;
    std::vector<Symbol> right_cycle;

    Symbol at(Coord n) const;
};

struct InjectivityDecision {
    bool injective = true;
    // when non-injective: two distinct configurations with equal images
    std::optional<EventuallyPeriodic> witness_x, witness_y;
};

// Exact injectivity decision for a one-dimensional constant configuration,
// by reachability in the pair automaton over (w-1)-blocks.
InjectivityDecision constant_injectivity_1d(const CellSet& memory, int alphabet,
                                            const LocalRule& rule);

// Independent check that a non-injectivity witness is sound: the two
// configurations differ and their images agree everywhere (periodicity
// reduces the check to a finite window).
bool replay_injectivity_witness(const CellSet& memory, int alphabet,
                                const LocalRule& rule, const EventuallyPeriodic& x,
                                const EventuallyPeriodic& y);

// Re-derives a certificate's claim through the engine.
bool replay_certificate(const RuleConfig& s, const Certificate& cert,
                        const Limits& limits = {});

}  // namespace anuca
