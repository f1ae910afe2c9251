#include "cellobow/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cellobow {

const std::array<std::string, 22>& traceColumns() {
    static const std::array<std::string, 22> columns = {
        "timestamp-robot", "time-elapsed-sec", "event-flag", "event-label",
        "current-event-type", "current-note-number", "current-note-name",
        "current-string", "current-bowing", "remaining-duration-sec",
        "TCP-pose-x", "TCP-pose-y", "TCP-pose-z", "TCP-pose-rx", "TCP-pose-ry",
        "TCP-pose-rz", "q-base", "q-shoulder", "q-elbow", "q-wrist1",
        "q-wrist2", "q-wrist3"};
    return columns;
}

namespace {

void appendFloat(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out += buf;
}

void appendLabel(std::string& out, const std::string& label) {
    if (label.find(',') != std::string::npos) {
        out += '"';
        out += label; // labels never contain quote characters
        out += '"';
    } else {
        out += label;
    }
}

// Split one CSV line; only double-quoted fields may contain commas.
std::vector<std::string> splitCsvLine(const std::string& line, int lineno) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"')
                quoted = false;
            else
                field += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw ParseFailure(lineno, "unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

double parseDouble(const std::string& s, int lineno, const std::string& col) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
        throw ParseFailure(lineno, "non-numeric value '" + s + "' in column " + col);
    return v;
}

int parseInt(const std::string& s, int lineno, const std::string& col) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty())
        throw ParseFailure(lineno, "non-integer value '" + s + "' in column " + col);
    return static_cast<int>(v);
}

} // namespace

std::string writeCsv(const std::vector<TrajectorySample>& samples) {
    std::string out;
    out.reserve(samples.size() * 200 + 256);
    const auto& columns = traceColumns();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& s : samples) {
        appendFloat(out, s.timestamp_robot);
        out += ',';
        appendFloat(out, s.time_elapsed_sec);
        out += ',';
        out += std::to_string(s.event_flag);
        out += ',';
        appendLabel(out, s.event_label);
        out += ',';
        out += s.current_event_type;
        out += ',';
        out += std::to_string(s.current_note_number);
        out += ',';
        out += s.current_note_name;
        out += ',';
        out += s.current_string;
        out += ',';
        out += s.current_bowing;
        out += ',';
        appendFloat(out, s.remaining_duration_sec);
        const Vec6 tcp = s.tcp.toVector();
        for (int i = 0; i < 6; ++i) {
            out += ',';
            appendFloat(out, tcp[i]);
        }
        for (int i = 0; i < 6; ++i) {
            out += ',';
            appendFloat(out, s.joints[i]);
        }
        out += '\n';
    }
    return out;
}

void writeCsvFile(const std::string& path,
                  const std::vector<TrajectorySample>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open output file: " + path);
    const std::string bytes = writeCsv(samples);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write failed: " + path);
}

TraceFile readCsv(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string line;
    int lineno = 0;
    TraceFile trace;
    const auto& columns = traceColumns();
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            const auto header = splitCsvLine(line, lineno);
            if (header.size() != columns.size())
                throw SchemaMismatch(1, "expected 22 columns, found " +
                                            std::to_string(header.size()));
            for (std::size_t i = 0; i < columns.size(); ++i)
                if (header[i] != columns[i])
                    throw SchemaMismatch(
                        1, "column " + std::to_string(i + 1) + " is '" +
                               header[i] + "', expected '" + columns[i] + "'");
            continue;
        }
        if (line.empty()) continue;
        const auto f = splitCsvLine(line, lineno);
        if (f.size() != 22)
            throw ParseFailure(lineno, "expected 22 fields, found " +
                                           std::to_string(f.size()));
        TrajectorySample s;
        s.timestamp_robot = parseDouble(f[0], lineno, columns[0]);
        s.time_elapsed_sec = parseDouble(f[1], lineno, columns[1]);
        s.event_flag = parseInt(f[2], lineno, columns[2]);
        s.event_label = f[3];
        s.current_event_type = f[4];
        s.current_note_number = parseInt(f[5], lineno, columns[5]);
        s.current_note_name = f[6];
        s.current_string = f[7];
        if (f[8].size() != 1)
            throw ParseFailure(lineno, "bad bowing field '" + f[8] + "'");
        s.current_bowing = f[8][0];
        s.remaining_duration_sec = parseDouble(f[9], lineno, columns[9]);
        Vec6 tcp;
        for (int i = 0; i < 6; ++i)
            tcp[i] = parseDouble(f[static_cast<std::size_t>(10 + i)], lineno,
                                 columns[static_cast<std::size_t>(10 + i)]);
        s.tcp = Pose::fromVector(tcp);
        for (int i = 0; i < 6; ++i)
            s.joints[i] = parseDouble(f[static_cast<std::size_t>(16 + i)], lineno,
                                      columns[static_cast<std::size_t>(16 + i)]);
        trace.rows.push_back(std::move(s));
    }
    if (lineno == 0) throw SchemaMismatch(1, "empty file");
    return trace;
}

TraceFile readCsvFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open trace file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return readCsv(ss.str());
}

std::string TraceStats::summary() const {
    std::ostringstream out;
    out << "rows: " << row_count << "\n";
    out << "duration_sec: " << duration_sec << "\n";
    out << "mean_sample_spacing_sec: " << mean_sample_spacing_sec << "\n";
    out << "crossing_count: " << crossing_count << "\n";
    out << "bow_distance_m: " << bow_distance_m << "\n";
    for (const auto& [name, secs] : per_string_time_sec)
        out << "string_" << name << "_stroke_sec: " << secs << "\n";
    return out.str();
}

TraceStats stats(const TraceFile& trace) {
    TraceStats st;
    st.row_count = trace.rows.size();
    if (trace.rows.empty()) return st;
    st.duration_sec = trace.rows.back().time_elapsed_sec -
                      trace.rows.front().time_elapsed_sec;
    if (trace.rows.size() > 1)
        st.mean_sample_spacing_sec =
            st.duration_sec / double(trace.rows.size() - 1);
    for (const auto& row : trace.rows)
        if (row.event_flag == 1 && row.current_event_type == "CrossOut")
            ++st.crossing_count;
    for (std::size_t i = 0; i + 1 < trace.rows.size(); ++i) {
        const auto& a = trace.rows[i];
        const auto& b = trace.rows[i + 1];
        if (a.current_event_type != "Stroke") continue;
        st.bow_distance_m += (b.tcp.position - a.tcp.position).norm();
        st.per_string_time_sec[a.current_string] +=
            b.time_elapsed_sec - a.time_elapsed_sec;
    }
    return st;
}

} // namespace cellobow
