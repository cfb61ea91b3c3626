#include "clipse/synth.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clipse/unicode.hpp"
#include "wordlists.hpp"

namespace clipse {

namespace {

// SplitMix64 step; mixes (seed, index) into one well-dispersed stream seed so
// each document is independent of how many documents precede it.
uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format(const char* fmt, auto... args) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Per-document slot fillers. Values are drawn with plain modulo so the output
// depends only on the mt19937_64 stream, not on a library's distribution
// implementation.
class Slots {
 public:
  explicit Slots(std::mt19937_64& rng) : rng_(rng) {}

  size_t index(size_t n) { return static_cast<size_t>(rng_() % n); }

  template <size_t N>
  std::string_view pick(const std::array<std::string_view, N>& pool) {
    return pool[index(N)];
  }

  long number(long lo, long hi) {
    return lo + static_cast<long>(rng_() % static_cast<uint64_t>(hi - lo + 1));
  }

  std::string digits(int len) {
    std::string out;
    out.push_back(static_cast<char>('1' + number(0, 8)));
    while (static_cast<int>(out.size()) < len) {
      out.push_back(static_cast<char>('0' + number(0, 9)));
    }
    return out;
  }

  std::string date() {
    int year = static_cast<int>(number(1970, 2029));
    int month = static_cast<int>(number(1, 12));
    int day = static_cast<int>(number(1, 28));
    switch (index(4)) {
      case 0:
        return format("%04d-%02d-%02d", year, month, day);
      case 1:
        return index(2) == 0 ? format("%d/%d/%04d", month, day, year)
                             : format("%02d/%02d/%02d", month, day, year % 100);
      case 2:
        return std::string(month_name(month)) + " " + std::to_string(day) +
               ", " + std::to_string(year);
      default:
        return std::to_string(day) + " " + std::string(month_name(month)) +
               " " + std::to_string(year);
    }
  }

  std::string month_year() {
    return std::string(month_name(static_cast<int>(number(1, 12)))) + " " +
           std::to_string(number(1970, 2029));
  }

  std::string time_of_day() {
    int minute = static_cast<int>(number(0, 59));
    if (index(2) == 0) {
      return format("%ld:%02d", number(0, 23), minute);
    }
    return format("%ld:%02d %s", number(1, 12), minute,
                  index(2) == 0 ? "am" : "pm");
  }

  std::string phone() {
    std::string area = digits(3), exchange = digits(3), line = digits(4);
    switch (index(3)) {
      case 0:
        return area + "-" + exchange + "-" + line;
      case 1:
        return "(" + area + ") " + exchange + "-" + line;
      default:
        return area + "." + exchange + "." + line;
    }
  }

  std::string email() {
    return ascii_word(pick(words::kGivenNames)) + "." +
           ascii_word(pick(words::kSurnames)) + "@" +
           std::string(pick(words::kEmailDomains));
  }

  std::string full_name() {
    return std::string(pick(words::kGivenNames)) + " " +
           std::string(pick(words::kSurnames));
  }

 private:
  std::string_view month_name(int month) {
    const auto& pool = index(2) == 0 ? words::kMonths : words::kMonthAbbrevs;
    return pool[static_cast<size_t>(month - 1)];
  }

  // Email locals must stay ASCII, so non-ASCII letters in a name are dropped.
  static std::string ascii_word(std::string_view name) {
    std::string out;
    for (char c : name) {
      if (c >= 'a' && c <= 'z') out.push_back(c);
      if (c >= 'A' && c <= 'Z') out.push_back(static_cast<char>(c - 'A' + 'a'));
    }
    return out.empty() ? "user" : out;
  }

  std::mt19937_64& rng_;
};

// Accumulates the document text and records an annotation for every slot at
// the exact code-point span the fill landed on.
struct Builder {
  std::string doc_id;
  std::string text;
  int64_t length = 0;  // code points
  std::vector<Annotation> annotations;

  void lit(std::string_view piece) {
    text += piece;
    length += uni::count_code_points(piece);
  }

  void slot(Category category, std::string_view raw_label,
            std::string_view value) {
    int64_t start = length;
    lit(value);
    annotations.push_back({doc_id, start, length, std::string(value),
                           std::string(raw_label), category, "gold"});
  }
};

void radiology_note(Builder& b, Slots& s) {
  switch (s.index(3)) {
    case 0:
      b.lit("RADIOLOGY REPORT\nExam date: ");
      b.slot(Category::date, "date", s.date());
      b.lit("\nAccession: ");
      b.slot(Category::id, "idnum", s.digits(7));
      b.lit("\nChest films reviewed; no acute findings. Dictated at ");
      b.slot(Category::date, "time", s.time_of_day());
      b.lit(". Call-backs via ");
      b.slot(Category::contact, "phone", s.phone());
      b.lit(".\n");
      break;
    case 1:
      b.lit("Imaging performed on ");
      b.slot(Category::date, "date", s.date());
      b.lit(". Reference number ");
      b.slot(Category::id, "idnum", s.digits(static_cast<int>(s.number(6, 9))));
      b.lit(". Impression: stable series, follow-up in six weeks. Contact "
            "the reading room at ");
      b.slot(Category::contact, "phone", s.phone());
      b.lit(".\n");
      break;
    default:
      b.lit("Study of ");
      b.slot(Category::date, "date", s.date());
      b.lit(" compared with prior of ");
      b.slot(Category::date, "date", s.date());
      b.lit(". MRN: ");
      b.slot(Category::id, "medicalrecord", s.digits(7));
      b.lit(". Results faxed to ");
      b.slot(Category::contact, "email", s.email());
      b.lit(".\n");
      break;
  }
}

void discharge_note(Builder& b, Slots& s) {
  switch (s.index(3)) {
    case 0:
      b.lit("DISCHARGE SUMMARY\nAdmitted ");
      b.slot(Category::date, "date", s.date());
      b.lit(", discharged ");
      b.slot(Category::date, "date", s.date());
      b.lit(". Visit number ");
      b.slot(Category::id, "idnum", s.digits(8));
      b.lit(". Medication list reviewed. Follow-up clinic line: ");
      b.slot(Category::contact, "phone", s.phone());
      b.lit(".\n");
      break;
    case 1:
      b.lit("Patient left in stable condition on ");
      b.slot(Category::date, "date", s.date());
      b.lit(". MRN: ");
      b.slot(Category::id, "medicalrecord", s.digits(6));
      b.lit(". Questions go to ");
      b.slot(Category::contact, "email", s.email());
      b.lit(".\n");
      break;
    default:
      b.lit("Hospital course uneventful. Seen ");
      b.slot(Category::date, "date", s.date());
      b.lit(" at ");
      b.slot(Category::date, "time", s.time_of_day());
      b.lit(", next review ");
      b.slot(Category::date, "date", s.month_year());
      b.lit(". Case ");
      b.slot(Category::id, "idnum", s.digits(7));
      b.lit(" closed. Billing desk: ");
      b.slot(Category::contact, "phone", s.phone());
      b.lit(".\n");
      break;
  }
}

void mixed_note(Builder& b, Slots& s) {
  switch (s.index(3)) {
    case 0:
      // Intake covers every category so even small corpora stay diverse.
      b.lit("Intake summary\nPatient: ");
      b.slot(Category::name, "patient", s.full_name());
      b.lit(" (");
      b.slot(Category::age, "age", std::to_string(s.number(18, 89)));
      b.lit(" year old ");
      b.slot(Category::profession, "profession",
             s.pick(words::kProfessions));
      b.lit(")\nAddress: ");
      b.slot(Category::location, "street", s.pick(words::kStreets));
      b.lit(", ");
      b.slot(Category::location, "city", s.pick(words::kCities));
      b.lit(", ");
      b.slot(Category::location, "state", s.pick(words::kStates));
      b.lit(" ");
      b.slot(Category::location, "zip", s.digits(5));
      b.lit("\nSeen by Dr. ");
      b.slot(Category::name, "doctor", s.pick(words::kSurnames));
      b.lit(" on ");
      b.slot(Category::date, "date", s.date());
      b.lit(". MRN: ");
      b.slot(Category::id, "medicalrecord", s.digits(7));
      b.lit(". Phone: ");
      b.slot(Category::contact, "phone", s.phone());
      b.lit(".\n");
      break;
    case 1:
      b.lit("Transfer note\n");
      b.slot(Category::name, "patient", s.full_name());
      b.lit(", case ");
      b.slot(Category::id, "idnum", s.digits(6));
      b.lit(", moved from ");
      b.slot(Category::location, "hospital", s.pick(words::kHospitals));
      b.lit(" to our service in ");
      b.slot(Category::location, "country", s.pick(words::kCountries));
      b.lit(" on ");
      b.slot(Category::date, "date", s.date());
      b.lit(". Employer: ");
      b.slot(Category::location, "organization",
             s.pick(words::kOrganizations));
      b.lit(". Reach the family at ");
      b.slot(Category::contact, "phone", s.phone());
      b.lit(".\n");
      break;
    default:
      b.lit("History\nFirst treated in ");
      b.slot(Category::date, "dateyear", std::to_string(s.number(1950, 2029)));
      b.lit(", now ");
      b.slot(Category::age, "age", std::to_string(s.number(90, 104)));
      b.lit(" years old. Longtime resident of ");
      b.slot(Category::location, "city", s.pick(words::kCities));
      b.lit(". Next review ");
      b.slot(Category::date, "date", s.month_year());
      b.lit("; scan results go to ");
      b.slot(Category::contact, "email", s.email());
      b.lit(".\n");
      break;
  }
}

template <size_t N>
std::vector<std::string> pool_entries(
    const std::array<std::string_view, N>& pool) {
  return std::vector<std::string>(pool.begin(), pool.end());
}

}  // namespace

std::string_view to_string(TemplateSet templates) {
  switch (templates) {
    case TemplateSet::radiology:
      return "radiology";
    case TemplateSet::discharge:
      return "discharge";
    case TemplateSet::mixed:
      return "mixed";
  }
  throw Error("invalid template set value");
}

TemplateSet template_set_from_string(std::string_view name) {
  if (name == "radiology") return TemplateSet::radiology;
  if (name == "discharge") return TemplateSet::discharge;
  if (name == "mixed") return TemplateSet::mixed;
  throw Error("unknown template set '" + std::string(name) +
              "' (expected radiology, discharge, or mixed)");
}

Corpus generate_corpus(uint64_t seed, int64_t n_docs, TemplateSet templates) {
  if (n_docs < 1) {
    throw Error("n_docs must be at least 1, got " + std::to_string(n_docs));
  }
  Corpus corpus;
  auto& gold = corpus.annotation_sets["gold"];
  for (int64_t i = 0; i < n_docs; ++i) {
    std::mt19937_64 rng(splitmix64(splitmix64(seed) + static_cast<uint64_t>(i)));
    Slots slots(rng);
    Builder builder;
    builder.doc_id = format("note-%06lld", static_cast<long long>(i));
    switch (templates) {
      case TemplateSet::radiology:
        radiology_note(builder, slots);
        break;
      case TemplateSet::discharge:
        discharge_note(builder, slots);
        break;
      case TemplateSet::mixed:
        mixed_note(builder, slots);
        break;
    }
    Document doc;
    doc.doc_id = builder.doc_id;
    doc.text = std::move(builder.text);
    doc.source = std::string(to_string(templates));
    doc.split = i * 5 < n_docs * 4 ? Split::train : Split::test;
    corpus.documents.emplace(doc.doc_id, std::move(doc));
    gold.insert(gold.end(),
                std::make_move_iterator(builder.annotations.begin()),
                std::make_move_iterator(builder.annotations.end()));
  }
  corpus.gazetteers.push_back(
      {"surnames", Category::name, pool_entries(words::kSurnames)});
  corpus.gazetteers.push_back(
      {"cities", Category::location, pool_entries(words::kCities)});
  canonicalize(corpus);
  validate_corpus(corpus);
  return corpus;
}

}  // namespace clipse
