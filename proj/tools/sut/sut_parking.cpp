// Parking-cost calculator over a line protocol:
//   lot <short|economy|surface|valet|garage>
//   entry M/D/YYYY H:MM <am|pm>
//   exit  M/D/YYYY H:MM <am|pm>
//   calc                          -> prints the fee as $D.DD
// Correct by default; --fault=NAME switches on one of the known bug classes:
//   weekmax    weekly maximum not applied (garage/surface/economy)
//   daymax     daily maximum not applied (garage/surface/economy)
//   early      exit before entry is billed as if the stay were positive
//              (garage/surface/economy)
//   shortday   daily maximum not applied (short-term)
//   halfhour   daily maximum applied before the trailing half hour is added
//              (short-term)
//   valetearly exit before entry billed as positive (valet)
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace {

struct Rates {
  long long halfhour, hour, daymax, weekmax;  // cents
};

std::map<std::string, Rates> default_rates() {
  return {
      {"short", {200, 400, 2400, 12000}},   {"economy", {100, 200, 1000, 5500}},
      {"surface", {125, 250, 1300, 7000}},  {"garage", {150, 300, 1600, 8500}},
      {"valet", {300, 600, 3000, 16000}},
  };
}

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int month_days(int y, int m) {
  static const int t[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : t[m - 1];
}

long long civil_days(long long y, int m, int d) {
  y -= m <= 2;
  long long era = (y >= 0 ? y : y - 399) / 400;
  unsigned yoe = static_cast<unsigned>(y - era * 400);
  unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

long long stamp_minutes(const std::string& text) {
  std::string cleaned = text;
  for (char& c : cleaned)
    if (c == '/' || c == ':') c = ' ';
  std::istringstream in(cleaned);
  int mo, d, y, h, mi;
  std::string meridiem;
  if (!(in >> mo >> d >> y >> h >> mi >> meridiem))
    throw std::runtime_error("malformed timestamp '" + text + "'");
  if (meridiem != "am" && meridiem != "pm")
    throw std::runtime_error("expected am or pm in '" + text + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > month_days(y, mo) || h < 1 || h > 12 || mi < 0 || mi > 59)
    throw std::runtime_error("timestamp out of range '" + text + "'");
  int h24 = h % 12 + (meridiem == "pm" ? 12 : 0);
  return (civil_days(y, mo, d) * 24 + h24) * 60 + mi;
}

struct Calculator {
  std::map<std::string, Rates> rates = default_rates();
  std::set<std::string> faults;

  bool gse(const std::string& lot) const {
    return lot == "garage" || lot == "surface" || lot == "economy";
  }

  long long fee_cents(const std::string& lot, long long minutes) const {
    const Rates& r = rates.at(lot);
    bool early_bug = (gse(lot) && faults.count("early")) ||
                     (lot == "valet" && faults.count("valetearly"));
    if (minutes < 0 && early_bug) minutes = -minutes;
    if (minutes <= 0) return 0;

    bool no_day_clamp =
        (gse(lot) && faults.count("daymax")) || (lot == "short" && faults.count("shortday"));
    bool clamp_before_half = lot == "short" && faults.count("halfhour");
    bool no_week_clamp = gse(lot) && faults.count("weekmax");

    long long ticks = (minutes + 29) / 30;
    long long total = 0;
    while (ticks > 0) {
      long long wt = std::min(ticks, 336LL);
      ticks -= wt;
      long long week = 0;
      while (wt > 0) {
        long long dt = std::min(wt, 48LL);
        wt -= dt;
        long long day;
        if (no_day_clamp)
          day = (dt / 2) * r.hour + (dt % 2) * r.halfhour;
        else if (clamp_before_half)
          day = std::min((dt / 2) * r.hour, r.daymax) + (dt % 2) * r.halfhour;
        else
          day = std::min((dt / 2) * r.hour + (dt % 2) * r.halfhour, r.daymax);
        week += day;
      }
      if (!no_week_clamp) week = std::min(week, r.weekmax);
      total += week;
    }
    return total;
  }
};

void load_rates(std::map<std::string, Rates>& rates, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rates file " + path);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    for (char& c : line)
      if (c == '=') c = ' ';
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key >> value)) continue;
    size_t dot = key.find('.');
    if (dot == std::string::npos) throw std::runtime_error("bad rates key " + key);
    double dollars = std::stod(value);
    long long cents = static_cast<long long>(dollars * 100.0 + 0.5);
    Rates& r = rates[key.substr(0, dot)];
    std::string field = key.substr(dot + 1);
    if (field == "halfhour")
      r.halfhour = cents;
    else if (field == "hour")
      r.hour = cents;
    else if (field == "daymax")
      r.daymax = cents;
    else if (field == "weekmax")
      r.weekmax = cents;
    else
      throw std::runtime_error("bad rates field " + field);
  }
}

}  // namespace

int main(int argc, char** argv) {
  Calculator calc;
  std::string script_path;
  try {
    for (int i = 1; i < argc; ++i) {
      std::string arg = argv[i];
      if (arg.rfind("--fault=", 0) == 0)
        calc.faults.insert(arg.substr(8));
      else if (arg.rfind("--rates=", 0) == 0)
        load_rates(calc.rates, arg.substr(8));
      else
        script_path = arg;
    }

    std::stringstream input;
    if (!script_path.empty()) {
      std::ifstream f(script_path);
      input << f.rdbuf();
    } else {
      input << std::cin.rdbuf();
    }

    std::string lot;
    long long entry = 0, exit_t = 0;
    bool have_lot = false, have_entry = false, have_exit = false;

    std::string line;
    while (std::getline(input, line)) {
      std::istringstream ls(line);
      std::string cmd;
      if (!(ls >> cmd)) continue;
      if (cmd == "lot") {
        if (!(ls >> lot) || !calc.rates.count(lot))
          throw std::runtime_error("unknown lot in '" + line + "'");
        have_lot = true;
      } else if (cmd == "entry" || cmd == "exit") {
        std::string rest;
        std::getline(ls, rest);
        long long m = stamp_minutes(rest);
        (cmd == "entry" ? entry : exit_t) = m;
        (cmd == "entry" ? have_entry : have_exit) = true;
      } else if (cmd == "calc") {
        if (!have_lot || !have_entry || !have_exit)
          throw std::runtime_error("calc before lot/entry/exit are all set");
        long long cents = calc.fee_cents(lot, exit_t - entry);
        std::printf("$%lld.%02lld\n", cents / 100, cents % 100);
      } else {
        throw std::runtime_error("unknown command '" + cmd + "'");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
