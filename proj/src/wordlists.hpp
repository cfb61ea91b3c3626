#pragma once

#include <array>
#include <string_view>

// Fixed word pools shared by the synthetic corpus generator and the builtin
// tagger profile. Keeping both on the same lists guarantees that gazetteer
// lookup can find every name or place the generator plants.
namespace clipse::words {

inline constexpr std::array<std::string_view, 96> kSurnames = {
    "Abbott",    "Acosta",   "Aguilar",  "Anderson", "Baker",    "Barnes",
    "Bennett",   "Blake",    "Brooks",   "Burton",   "Calhoun",  "Campbell",
    "Carter",    "Castillo", "Chen",     "Cohen",    "Coleman",  "Cruz",
    "Dalton",    "Davis",    "Delgado",  "Dunn",     "Ellis",    "Emerson",
    "Farley",    "Fischer",  "Fleming",  "Foster",   "Franklin", "García",
    "Gibson",    "Goldberg", "Graham",   "Greene",   "Gupta",    "Hale",
    "Harmon",    "Hayes",    "Henderson", "Holloway", "Horowitz", "Hughes",
    "Ingram",    "Ivanov",   "Jacobs",   "Jennings", "Keller",   "Kim",
    "Kowalski",  "Lambert",  "Larsen",   "Lee",      "Lindqvist", "Lopez",
    "Maddox",    "Marshall", "McCarthy", "Mendoza",  "Mercer",   "Müller",
    "Nakamura",  "Nguyen",   "Norris",   "O'Connor", "Okafor",   "Olsen",
    "Ortiz",     "Patel",    "Pearson",  "Petrov",   "Quinn",    "Ramirez",
    "Reyes",     "Richter",  "Rivera",   "Rossi",    "Santos",   "Schmidt",
    "Shah",      "Silva",    "Simmons",  "Singh",    "Sloane",   "Smith",
    "Sullivan",  "Takahashi", "Thornton", "Tran",     "Underwood", "Vargas",
    "Walsh",     "Weber",    "Whitfield", "Wong",     "Yamamoto", "Zhang",
};

inline constexpr std::array<std::string_view, 40> kGivenNames = {
    "Aaron",   "Alice",  "Amara",  "Andrei",  "Anita",  "Carlos",
    "Clara",   "Daniel", "Elena",  "Emil",    "Fatima", "Felix",
    "Grace",   "Hannah", "Hiroshi", "Ingrid", "Isabel", "James",
    "Joanna",  "José",   "Karim",  "Laura",   "Liam",   "Lucía",
    "Marcus",  "María",  "Mei",    "Nadia",   "Noah",   "Olga",
    "Patrick", "Priya",  "Rafael", "Rebecca", "Samuel", "Sofia",
    "Tomás",   "Victor", "Wei",    "Yusuf",
};

inline constexpr std::array<std::string_view, 20> kCities = {
    "Ashland",    "Belmont",   "Brookfield", "Carterville", "Clearwater",
    "Eastport",   "Fairview",  "Glenwood",   "Greenville",  "Harborview",
    "Kingsport",  "Lakewood",  "Mapleton",   "Northfield",  "Oakdale",
    "Riverside",  "Silverton", "Springdale", "Westbrook",   "Winfield",
};

inline constexpr std::array<std::string_view, 12> kStates = {
    "Arizona",  "Colorado", "Georgia",  "Illinois",  "Kansas",  "Maine",
    "Michigan", "Nevada",   "Ohio",     "Oregon",    "Texas",   "Vermont",
};

inline constexpr std::array<std::string_view, 8> kCountries = {
    "Australia", "Brazil", "Canada", "France",
    "Ireland",   "Japan",  "Norway", "Portugal",
};

inline constexpr std::array<std::string_view, 8> kHospitals = {
    "Mercy General Hospital",   "Saint Agnes Medical Center",
    "Lakeside Clinic",          "Riverbend Memorial Hospital",
    "Northgate Health Center",  "Pinecrest Community Hospital",
    "Harbor Point Infirmary",   "Valley View Medical Center",
};

inline constexpr std::array<std::string_view, 8> kOrganizations = {
    "Acme Insurance",          "Beacon Labs",
    "Crestline Pharmaceuticals", "Dynamo Logistics",
    "Everfield Trust",         "Granite Mutual",
    "Horizon Analytics",       "Keystone Transit",
};

inline constexpr std::array<std::string_view, 16> kProfessions = {
    "accountant", "architect",  "baker",     "carpenter",
    "electrician", "engineer",  "farmer",    "firefighter",
    "journalist", "librarian",  "machinist", "nurse",
    "pharmacist", "plumber",    "teacher",   "welder",
};

inline constexpr std::array<std::string_view, 12> kStreets = {
    "Alder Street",   "Birch Avenue",  "Cedar Lane",    "Dogwood Drive",
    "Elm Street",     "Foxglove Road", "Hawthorn Court", "Juniper Way",
    "Linden Avenue",  "Magnolia Boulevard", "Poplar Street", "Willow Lane",
};

inline constexpr std::array<std::string_view, 4> kEmailDomains = {
    "example.org",
    "mail.example.com",
    "clinic-mail.net",
    "records.example.edu",
};

inline constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December",
};

inline constexpr std::array<std::string_view, 12> kMonthAbbrevs = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
};

}  // namespace clipse::words
