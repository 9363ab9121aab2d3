# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch kernel: draws, group stages and brackets for a block of runs.

Mirrors ``handball_sim._pykernel`` draw for draw; see ``handball_sim.rng`` for
the stream construction.
"""

from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

DEF MAXT = 32
DEF MAXG = 8
DEF MAXM = 32

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t TAG_MULT = 0xD1B54A32D192ED03ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0

cdef enum:
    ERR_NONE = 0
    ERR_THIRD_MEETING = 1

ctypedef struct Program:
    int n, k, s, mcount, msize, carry, policy, nko, final_idx
    int slot_group[MAXG][MAXT]
    int slot_pos[MAXG][MAXT]
    int ko[MAXM][2][3]
    int sf[MAXM]
    int place[4][3]
    uint64_t draw_tag, tb_tag


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t stream_key(uint64_t seed, uint64_t run, uint64_t tag) nogil:
    cdef uint64_t base = mix64(mix64(seed) ^ (tag * TAG_MULT))
    return mix64(base + (run + 1) * GOLDEN)


ctypedef struct Stream:
    uint64_t key
    uint64_t counter


cdef inline uint64_t next_u64(Stream* st) nogil:
    st.counter += 1
    return mix64(st.key + st.counter * GOLDEN)


cdef inline int below(Stream* st, int n) nogil:
    return <int>(((next_u64(st) >> 32) * <uint64_t>n) >> 32)


ctypedef struct RunState:
    uint8_t beats[2][MAXT][MAXT]
    uint8_t meet[MAXT][MAXT]
    int stand[2 * MAXG][MAXT]
    int win[MAXM]
    int lose[MAXM]
    int matches
    int error


cdef inline int play_pair(RunState* rs, int a, int b) nogil:
    """Winner of a new meeting between ``a`` and ``b`` (1-based); 0 on a third meeting."""
    cdef int lo = a if a < b else b
    cdef int hi = b if a < b else a
    cdef int m = rs.meet[lo - 1][hi - 1]
    if m >= 2:
        rs.error = ERR_THIRD_MEETING
        return 0
    rs.meet[lo - 1][hi - 1] = m + 1
    rs.matches += 1
    return a if rs.beats[m][a - 1][b - 1] else b


cdef inline bint _before(int* points, uint64_t* keys, int* members, int p, int q) nogil:
    if points[p] != points[q]:
        return points[p] > points[q]
    if keys[p] != keys[q]:
        return keys[p] < keys[q]
    return members[p] < members[q]


cdef int play_group(RunState* rs, int* members, int* origin, int size, int carry,
                    Stream* tb, int* out) nogil:
    """Round robin among ``members``; pairs sharing an ``origin`` >= 0 reuse their first meeting."""
    cdef int points[MAXT]
    cdef uint64_t keys[MAXT]
    cdef int idx[MAXT]
    cdef int x, y, a, b, w, i, j, t
    for x in range(size):
        points[x] = 0
    for x in range(size):
        for y in range(x + 1, size):
            a = members[x]
            b = members[y]
            if carry and origin[x] >= 0 and origin[x] == origin[y]:
                w = a if rs.beats[0][a - 1][b - 1] else b
            else:
                w = play_pair(rs, a, b)
                if w == 0:
                    return -1
            if w == a:
                points[x] += 2
            else:
                points[y] += 2
    for x in range(size):
        keys[x] = next_u64(tb)
        idx[x] = x
    # insertion sort by (-points, key, team)
    for i in range(1, size):
        t = idx[i]
        j = i - 1
        while j >= 0 and _before(points, keys, members, t, idx[j]):
            idx[j + 1] = idx[j]
            j -= 1
        idx[j + 1] = t
    for x in range(size):
        out[x] = members[idx[x]]
    return 0


cdef inline int resolve(RunState* rs, int* ref) nogil:
    if ref[0] == 0:
        return rs.stand[ref[1]][ref[2]]
    if ref[0] == 1:
        return rs.win[ref[1]]
    return rs.lose[ref[1]]


cdef int play_design(Program* pg, RunState* rs, uint64_t seed, uint64_t run,
                     int* places, int* finalists, int* sfpairs) nogil:
    cdef Stream dr, tb
    cdef int groups[MAXG][MAXT]
    cdef int members[MAXT]
    cdef int origin[MAXT]
    cdef int order[MAXT]
    cdef int g, i, m, idx, j, tmp, a, b, w, n_sf
    dr.key = stream_key(seed, run, pg.draw_tag)
    dr.counter = 0
    tb.key = stream_key(seed, run, pg.tb_tag)
    tb.counter = 0
    memset(rs.meet, 0, sizeof(rs.meet))
    rs.matches = 0
    rs.error = 0

    if pg.policy == 2:
        for i in range(pg.n):
            groups[0][i] = i + 1
    elif pg.policy == 0:
        for m in range(pg.s):
            for i in range(pg.k):
                order[i] = i
            for i in range(pg.k - 1, 0, -1):
                j = below(&dr, i + 1)
                tmp = order[i]; order[i] = order[j]; order[j] = tmp
            for idx in range(pg.k):
                groups[order[idx]][m] = m * pg.k + idx + 1
    else:
        for i in range(pg.n):
            order[i] = i + 1
        for i in range(pg.n - 1, 0, -1):
            j = below(&dr, i + 1)
            tmp = order[i]; order[i] = order[j]; order[j] = tmp
        for g in range(pg.k):
            for i in range(pg.s):
                groups[g][i] = order[g * pg.s + i]

    for i in range(pg.s):
        origin[i] = -1
    for g in range(pg.k):
        if play_group(rs, groups[g], origin, pg.s, 0, &tb, rs.stand[g]) < 0:
            return -1

    for g in range(pg.mcount):
        for i in range(pg.msize):
            members[i] = rs.stand[pg.slot_group[g][i]][pg.slot_pos[g][i]]
            origin[i] = pg.slot_group[g][i]
        if play_group(rs, members, origin, pg.msize, pg.carry, &tb, rs.stand[pg.k + g]) < 0:
            return -1

    n_sf = 0
    for m in range(pg.nko):
        a = resolve(rs, pg.ko[m][0])
        b = resolve(rs, pg.ko[m][1])
        w = play_pair(rs, a, b)
        if w == 0:
            return -1
        rs.win[m] = w
        rs.lose[m] = b if w == a else a
        if pg.sf[m]:
            sfpairs[2 * n_sf] = a if a < b else b
            sfpairs[2 * n_sf + 1] = b if a < b else a
            n_sf += 1

    for i in range(4):
        places[i] = resolve(rs, pg.place[i])
    if pg.final_idx >= 0:
        a = rs.win[pg.final_idx]
        b = rs.lose[pg.final_idx]
        finalists[0] = a if a < b else b
        finalists[1] = b if a < b else a
    else:
        finalists[0] = 0
        finalists[1] = 0
    return n_sf


cdef void generate(RunState* rs, const double[:, ::1] P, int n, uint64_t key) nogil:
    cdef uint64_t c = 0
    cdef int t, a, b
    cdef double u
    cdef uint8_t w
    for t in range(2):
        for a in range(n):
            for b in range(a + 1, n):
                c += 1
                u = <double>(mix64(key + c * GOLDEN) >> 11) * INV_2_53
                w = 1 if u < P[a, b] else 0
                rs.beats[t][a][b] = w
                rs.beats[t][b][a] = 1 - w


cdef class ProgramSet:
    """Compiled programs for a list of designs, held in C memory."""

    cdef Program* progs
    cdef public int count

    def __cinit__(self, list programs):
        cdef int d, i, g, m, side, f
        self.count = len(programs)
        self.progs = <Program*> malloc(max(self.count, 1) * sizeof(Program))
        if self.progs == NULL:
            raise MemoryError()
        memset(self.progs, 0, max(self.count, 1) * sizeof(Program))
        for d, p in enumerate(programs):
            self.progs[d].n = p.n_teams
            self.progs[d].k = p.group_count
            self.progs[d].s = p.group_size
            self.progs[d].mcount = p.main_count
            self.progs[d].msize = p.main_size
            self.progs[d].carry = p.carry_over
            self.progs[d].policy = p.policy
            self.progs[d].nko = len(p.knockout)
            self.progs[d].final_idx = p.final_index
            self.progs[d].draw_tag = p.draw_tag
            self.progs[d].tb_tag = p.tiebreak_tag
            for g, slots in enumerate(p.main_slots):
                for i, (grp, pos) in enumerate(slots):
                    self.progs[d].slot_group[g][i] = grp
                    self.progs[d].slot_pos[g][i] = pos
            for m, sides in enumerate(p.knockout):
                for side in range(2):
                    for f in range(3):
                        self.progs[d].ko[m][side][f] = sides[side][f]
                self.progs[d].sf[m] = p.semifinal[m]
            for i in range(4):
                for f in range(3):
                    self.progs[d].place[i][f] = p.placements[i][f]

    def __dealloc__(self):
        if self.progs != NULL:
            free(self.progs)


def run_block(ProgramSet programs, const double[:, ::1] P, uint64_t seed, int64_t start, int64_t stop,
              int64_t[:, :, ::1] place_counts, int64_t[:, :, ::1] final_pairs,
              int64_t[:, ::1] semifinalists, int64_t[:, :, ::1] semifinal_pairs,
              int64_t[::1] matches):
    """Simulate runs ``start .. stop-1`` for every program, adding into the tally arrays.

    Returns ``(error_code, run_index)``; ``error_code`` 0 means success.
    """
    cdef int n = P.shape[0]
    cdef int D = programs.count
    cdef int64_t r
    cdef int d, i, n_sf
    cdef int places[4]
    cdef int fin[2]
    cdef int sfp[2 * MAXM]
    cdef int err = 0
    cdef int64_t err_run = -1
    cdef RunState* rs = <RunState*> malloc(sizeof(RunState))
    if rs == NULL:
        raise MemoryError()
    try:
        with nogil:
            for r in range(start, stop):
                generate(rs, P, n, stream_key(seed, <uint64_t>r, 0))
                for d in range(D):
                    n_sf = play_design(&programs.progs[d], rs, seed, <uint64_t>r, places, fin, sfp)
                    if n_sf < 0:
                        err = rs.error
                        err_run = r
                        break
                    for i in range(4):
                        place_counts[d, places[i] - 1, i] += 1
                    if fin[0] > 0:
                        final_pairs[d, fin[0] - 1, fin[1] - 1] += 1
                    for i in range(n_sf):
                        semifinalists[d, sfp[2 * i] - 1] += 1
                        semifinalists[d, sfp[2 * i + 1] - 1] += 1
                        semifinal_pairs[d, sfp[2 * i] - 1, sfp[2 * i + 1] - 1] += 1
                    matches[d] += rs.matches
                if err:
                    break
    finally:
        free(rs)
    return err, err_run


def outcome_block(const double[:, ::1] P, uint64_t seed, int64_t run):
    """Both outcome tables of one run as nested lists (for cross-checking)."""
    cdef int n = P.shape[0]
    cdef RunState* rs = <RunState*> malloc(sizeof(RunState))
    if rs == NULL:
        raise MemoryError()
    memset(rs, 0, sizeof(RunState))
    try:
        generate(rs, P, n, stream_key(seed, <uint64_t>run, 0))
        return [[[bool(rs.beats[t][a][b]) for b in range(n)] for a in range(n)] for t in range(2)]
    finally:
        free(rs)
