# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled CDCL engine, interface-identical to cutstock.satcore.engine.

Same algorithm as the pure-Python reference: two watched literals with
blockers, first-UIP learning with basic minimisation, activity heap,
phase saving, Luby restarts, LBD-based database reduction, solving under
assumptions with clause retention.  Clauses live in one flat arena:
[size, lbd, lit...] at each reference offset; size < 0 marks deletion.
"""

import time as _time

from libcpp.vector cimport vector

from .engine import SAT, UNKNOWN, UNSAT, SolveResult

cdef int _UNDEF = -1
cdef int _NO_REASON = -1


cdef long long _luby(long long i):
    cdef long long size = 1, seq = 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) // 2
        seq -= 1
        i = i % size
    return 1LL << seq


cdef class Solver:
    cdef vector[int] ca                 # clause arena
    cdef vector[vector[int]] watches    # per literal index, (cref, blocker) pairs
    cdef vector[signed char] assign_
    cdef vector[int] level_
    cdef vector[int] reason_
    cdef vector[double] activity_
    cdef vector[signed char] phase_
    cdef vector[signed char] seen_
    cdef vector[int] trail_
    cdef vector[int] trail_lim_
    cdef vector[int] heap_
    cdef vector[int] heap_pos_
    cdef vector[int] learnt_refs_
    cdef vector[int] to_clear_
    cdef int nvars
    cdef int qhead
    cdef bint ok
    cdef double var_inc
    cdef double var_decay
    cdef double max_learnts
    cdef public long long conflicts
    cdef public long long decisions
    cdef public long long propagations
    cdef public long long restarts
    cdef public long long learned
    cdef public long long live_clauses
    cdef public int seed

    def __cinit__(self, int num_vars=0, int seed=0):
        self.nvars = 0
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.var_decay = 0.95
        self.max_learnts = 4000.0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.restarts = 0
        self.learned = 0
        self.live_clauses = 0
        self.seed = seed
        self.assign_.push_back(_UNDEF)
        self.level_.push_back(0)
        self.reason_.push_back(_NO_REASON)
        self.activity_.push_back(0.0)
        self.phase_.push_back(0)
        self.seen_.push_back(0)
        self.heap_pos_.push_back(-1)
        self.watches.resize(2)
        if num_vars:
            self.add_vars(num_vars)

    # ------------------------------------------------------------------

    @property
    def num_vars(self):
        return self.nvars

    def add_vars(self, int count):
        cdef int first = self.nvars + 1
        cdef int i
        for i in range(count):
            self.nvars += 1
            self.assign_.push_back(_UNDEF)
            self.level_.push_back(0)
            self.reason_.push_back(_NO_REASON)
            self.activity_.push_back(0.0)
            self.phase_.push_back(0)
            self.seen_.push_back(0)
            self.watches.resize(self.watches.size() + 2)
            self.heap_pos_.push_back(-1)
            self._heap_insert(self.nvars)
        return first

    cdef inline int _widx(self, int lit):
        return (lit << 1) if lit > 0 else (((-lit) << 1) | 1)

    cdef inline int _lit_value(self, int lit):
        cdef int a = self.assign_[lit if lit > 0 else -lit]
        if a < 0:
            return a
        return a if lit > 0 else a ^ 1

    def add_clause(self, lits):
        if not self.ok:
            return
        cdef vector[int] out
        cdef int lit, v, val, other
        cdef bint dup
        for item in lits:
            lit = item
            v = lit if lit > 0 else -lit
            if v < 1 or v > self.nvars:
                raise ValueError(
                    f"literal {lit} outside declared variables 1..{self.nvars}"
                )
            dup = False
            for other in out:
                if other == -lit:
                    return  # tautology
                if other == lit:
                    dup = True
                    break
            if dup:
                continue
            val = self._lit_value(lit)
            if val == 1:
                return  # satisfied at top level
            if val == 0:
                continue
            out.push_back(lit)
        if out.size() == 0:
            self.ok = False
            return
        if out.size() == 1:
            self._enqueue(out[0], _NO_REASON)
            if self._propagate() != _NO_REASON:
                self.ok = False
            return
        self._new_clause(out, -1)

    cdef int _new_clause(self, vector[int]& lits, int lbd):
        cdef int cref = <int> self.ca.size()
        cdef size_t i
        self.ca.push_back(<int> lits.size())
        self.ca.push_back(lbd)
        for i in range(lits.size()):
            self.ca.push_back(lits[i])
        self.live_clauses += 1
        # watch the first two literals, with the other one as blocker
        self.watches[self._widx(lits[0])].push_back(cref)
        self.watches[self._widx(lits[0])].push_back(lits[1])
        self.watches[self._widx(lits[1])].push_back(cref)
        self.watches[self._widx(lits[1])].push_back(lits[0])
        return cref

    # ------------------------------------------------------------------
    # activity heap

    cdef inline bint _heap_less(self, int u, int v):
        cdef double au = self.activity_[u]
        cdef double av = self.activity_[v]
        return au > av or (au == av and u < v)

    cdef void _heap_insert(self, int v):
        if self.heap_pos_[v] >= 0:
            return
        self.heap_.push_back(v)
        self.heap_pos_[v] = <int> self.heap_.size() - 1
        self._heap_up(<int> self.heap_.size() - 1)

    cdef void _heap_up(self, int i):
        cdef int v = self.heap_[i]
        cdef int parent, p
        while i > 0:
            parent = (i - 1) >> 1
            p = self.heap_[parent]
            if not self._heap_less(v, p):
                break
            self.heap_[i] = p
            self.heap_pos_[p] = i
            i = parent
        self.heap_[i] = v
        self.heap_pos_[v] = i

    cdef void _heap_down(self, int i):
        cdef int v = self.heap_[i]
        cdef int n = <int> self.heap_.size()
        cdef int left, right, child
        while True:
            left = 2 * i + 1
            if left >= n:
                break
            right = left + 1
            child = left
            if right < n and self._heap_less(self.heap_[right], self.heap_[left]):
                child = right
            if not self._heap_less(self.heap_[child], v):
                break
            self.heap_[i] = self.heap_[child]
            self.heap_pos_[self.heap_[i]] = i
            i = child
        self.heap_[i] = v
        self.heap_pos_[v] = i

    cdef int _heap_pop(self):
        cdef int top = self.heap_[0]
        cdef int last = self.heap_.back()
        self.heap_.pop_back()
        self.heap_pos_[top] = -1
        if self.heap_.size() > 0:
            self.heap_[0] = last
            self.heap_pos_[last] = 0
            self._heap_down(0)
        return top

    cdef void _bump(self, int v):
        cdef int u
        self.activity_[v] += self.var_inc
        if self.activity_[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.activity_[u] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_pos_[v] >= 0:
            self._heap_up(self.heap_pos_[v])

    # ------------------------------------------------------------------
    # trail

    cdef inline void _enqueue(self, int lit, int reason):
        cdef int v = lit if lit > 0 else -lit
        cdef signed char value = 1 if lit > 0 else 0
        self.assign_[v] = value
        self.level_[v] = <int> self.trail_lim_.size()
        self.reason_[v] = reason
        self.trail_.push_back(lit)

    cdef void _cancel_until(self, int lvl):
        if <int> self.trail_lim_.size() <= lvl:
            return
        cdef int bound = self.trail_lim_[lvl]
        cdef int i, lit, v
        for i in range(<int> self.trail_.size() - 1, bound - 1, -1):
            lit = self.trail_[i]
            v = lit if lit > 0 else -lit
            self.phase_[v] = self.assign_[v]
            self.assign_[v] = _UNDEF
            self.reason_[v] = _NO_REASON
            if self.heap_pos_[v] < 0:
                self._heap_insert(v)
        self.trail_.resize(bound)
        self.trail_lim_.resize(lvl)
        self.qhead = bound

    # ------------------------------------------------------------------
    # propagation

    cdef int _propagate(self):
        cdef int p, false_lit, widx, cref, blocker, first, lk
        cdef int bv, fv, kv, size, base
        cdef size_t i, j, n, k
        cdef bint moved
        cdef vector[int]* wl
        while self.qhead < <int> self.trail_.size():
            p = self.trail_[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = -p
            widx = self._widx(false_lit)
            wl = &self.watches[widx]
            i = 0
            j = 0
            n = wl[0].size()
            while i < n:
                cref = wl[0][i]
                blocker = wl[0][i + 1]
                i += 2
                bv = self.assign_[blocker if blocker > 0 else -blocker]
                if bv >= 0 and (bv if blocker > 0 else bv ^ 1) == 1:
                    wl[0][j] = cref
                    wl[0][j + 1] = blocker
                    j += 2
                    continue
                size = self.ca[cref]
                if size < 0:
                    continue  # deleted clause
                base = cref + 2
                if self.ca[base] == false_lit:
                    self.ca[base] = self.ca[base + 1]
                    self.ca[base + 1] = false_lit
                first = self.ca[base]
                fv = self.assign_[first if first > 0 else -first]
                if first != blocker and fv >= 0 and (fv if first > 0 else fv ^ 1) == 1:
                    wl[0][j] = cref
                    wl[0][j + 1] = first
                    j += 2
                    continue
                moved = False
                for k in range(2, <size_t> size):
                    lk = self.ca[base + k]
                    kv = self.assign_[lk if lk > 0 else -lk]
                    if kv < 0 or (kv if lk > 0 else kv ^ 1) == 1:
                        self.ca[base + 1] = lk
                        self.ca[base + k] = false_lit
                        self.watches[self._widx(lk)].push_back(cref)
                        self.watches[self._widx(lk)].push_back(first)
                        moved = True
                        break
                if moved:
                    continue
                wl[0][j] = cref
                wl[0][j + 1] = first
                j += 2
                if fv >= 0 and (fv if first > 0 else fv ^ 1) == 0:
                    while i < n:
                        wl[0][j] = wl[0][i]
                        wl[0][j + 1] = wl[0][i + 1]
                        i += 2
                        j += 2
                    wl[0].resize(j)
                    self.qhead = <int> self.trail_.size()
                    return cref
                self._enqueue(first, cref)
            wl[0].resize(j)
        return _NO_REASON

    # ------------------------------------------------------------------
    # conflict analysis

    cdef int _analyze(self, int confl, vector[int]& learnt):
        """Fills ``learnt``; returns the backjump level (lbd via last slot).

        learnt[0] is the asserting literal; the second watch (max level) is
        moved to learnt[1].
        """
        cdef int cur_level = <int> self.trail_lim_.size()
        cdef int path = 0
        cdef int p = 0
        cdef int index = <int> self.trail_.size() - 1
        cdef int size, base, start, q, v, k, lit
        learnt.clear()
        learnt.push_back(0)
        self.to_clear_.clear()
        while True:
            size = self.ca[confl]
            base = confl + 2
            start = 0 if p == 0 else 1
            for k in range(start, size):
                q = self.ca[base + k]
                v = q if q > 0 else -q
                if not self.seen_[v] and self.level_[v] > 0:
                    self.seen_[v] = 1
                    self.to_clear_.push_back(v)
                    self._bump(v)
                    if self.level_[v] >= cur_level:
                        path += 1
                    else:
                        learnt.push_back(q)
            while True:
                lit = self.trail_[index]
                v = lit if lit > 0 else -lit
                if self.seen_[v]:
                    break
                index -= 1
            p = self.trail_[index]
            index -= 1
            v = p if p > 0 else -p
            confl = self.reason_[v]
            self.seen_[v] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = -p

        # basic minimisation: drop literals whose whole reason is subsumed
        cdef vector[int] kept
        cdef int r, rsize, rbase, other, ov, other_i
        cdef bint needed
        kept.push_back(learnt[0])
        for k in range(1, <int> learnt.size()):
            q = learnt[k]
            v = q if q > 0 else -q
            r = self.reason_[v]
            if r == _NO_REASON:
                kept.push_back(q)
                continue
            rsize = self.ca[r]
            rbase = r + 2
            needed = False
            for other_i in range(1, rsize):
                other = self.ca[rbase + other_i]
                ov = other if other > 0 else -other
                if not self.seen_[ov] and self.level_[ov] > 0:
                    needed = True
                    break
            if needed:
                kept.push_back(q)
        learnt.swap(kept)

        for k in range(<int> self.to_clear_.size()):
            self.seen_[self.to_clear_[k]] = 0

        cdef int bt = 0
        cdef int best, lv, bvv
        if learnt.size() > 1:
            best = 1
            for k in range(2, <int> learnt.size()):
                lv = learnt[k] if learnt[k] > 0 else -learnt[k]
                bvv = learnt[best] if learnt[best] > 0 else -learnt[best]
                if self.level_[lv] > self.level_[bvv]:
                    best = k
            q = learnt[1]
            learnt[1] = learnt[best]
            learnt[best] = q
            bvv = learnt[1] if learnt[1] > 0 else -learnt[1]
            bt = self.level_[bvv]
        return bt

    cdef int _clause_lbd(self, vector[int]& learnt):
        cdef vector[int] levels
        cdef int k, v, lv, j
        cdef bint found
        for k in range(<int> learnt.size()):
            v = learnt[k] if learnt[k] > 0 else -learnt[k]
            lv = self.level_[v]
            found = False
            for j in range(<int> levels.size()):
                if levels[j] == lv:
                    found = True
                    break
            if not found:
                levels.push_back(lv)
        return <int> levels.size()

    # ------------------------------------------------------------------
    # learned clause database reduction

    cdef bint _locked(self, int cref):
        cdef int head = self.ca[cref + 2]
        cdef int v = head if head > 0 else -head
        return self.assign_[v] != _UNDEF and self.reason_[v] == cref

    cdef void _reduce_db(self):
        live = []
        cdef int r, k
        for k in range(<int> self.learnt_refs_.size()):
            r = self.learnt_refs_[k]
            if self.ca[r] >= 0:
                live.append((self.ca[r + 1], self.ca[r], r))  # (lbd, size, cref)
        live.sort()
        cdef int cut = len(live) // 2
        for lbd, size, r in live[cut:]:
            if lbd <= 2 or size <= 2 or self._locked(r):
                continue
            self.ca[r] = -self.ca[r]
            self.live_clauses -= 1
        cdef vector[int] fresh
        for k in range(<int> self.learnt_refs_.size()):
            r = self.learnt_refs_[k]
            if self.ca[r] >= 0:
                fresh.push_back(r)
        self.learnt_refs_.swap(fresh)
        self.max_learnts *= 1.2

    # ------------------------------------------------------------------
    # solving

    def solve(self, assumptions=(), conflict_limit=None, time_limit=None):
        cdef vector[int] assume
        cdef int lit, v
        for item in assumptions:
            lit = item
            v = lit if lit > 0 else -lit
            if v < 1 or v > self.nvars:
                raise ValueError(f"assumption {lit} outside declared variables")
            assume.push_back(lit)
        if not self.ok:
            return SolveResult(UNSAT, None, self.stats())

        cdef double deadline = -1.0
        if time_limit is not None:
            deadline = _time.perf_counter() + <double> time_limit
        cdef long long conflict_budget = -1
        if conflict_limit is not None:
            conflict_budget = self.conflicts + <long long> conflict_limit
        cdef long long restart_count = 0
        cdef long long since_restart = 0
        cdef long long next_restart = 100 * _luby(0)
        cdef long long checkpoint = 0
        cdef int confl, bt, lbd, cref, val, u
        cdef vector[int] learnt
        status = UNKNOWN
        model = None

        if self._propagate() != _NO_REASON:
            self.ok = False
            return SolveResult(UNSAT, None, self.stats())

        while True:
            confl = self._propagate()
            if confl != _NO_REASON:
                self.conflicts += 1
                since_restart += 1
                if self.trail_lim_.size() == 0:
                    self.ok = False
                    status = UNSAT
                    break
                bt = self._analyze(confl, learnt)
                self._cancel_until(bt)
                if learnt.size() == 1:
                    self._enqueue(learnt[0], _NO_REASON)
                else:
                    lbd = self._clause_lbd(learnt)
                    cref = self._new_clause(learnt, lbd)
                    self.learnt_refs_.push_back(cref)
                    self._enqueue(learnt[0], cref)
                self.learned += 1
                self.var_inc /= self.var_decay
                if conflict_budget >= 0 and self.conflicts >= conflict_budget:
                    break
                if deadline >= 0.0 and self.conflicts % 256 == 0:
                    if _time.perf_counter() > deadline:
                        break
                if since_restart >= next_restart:
                    restart_count += 1
                    since_restart = 0
                    next_restart = 100 * _luby(restart_count)
                    self.restarts += 1
                    self._cancel_until(0)
                if <double> self.learnt_refs_.size() >= self.max_learnts:
                    self._reduce_db()
            else:
                if <int> self.trail_lim_.size() < <int> assume.size():
                    lit = assume[self.trail_lim_.size()]
                    val = self._lit_value(lit)
                    if val == 1:
                        self.trail_lim_.push_back(<int> self.trail_.size())
                        continue
                    if val == 0:
                        status = UNSAT
                        break
                    self.trail_lim_.push_back(<int> self.trail_.size())
                    self._enqueue(lit, _NO_REASON)
                    continue
                checkpoint += 1
                if deadline >= 0.0 and checkpoint % 512 == 0:
                    if _time.perf_counter() > deadline:
                        break
                v = self._pick_branch_var()
                if v == 0:
                    status = SAT
                    model = [False] * (self.nvars + 1)
                    for u in range(1, self.nvars + 1):
                        model[u] = self.assign_[u] == 1
                    break
                self.decisions += 1
                self.trail_lim_.push_back(<int> self.trail_.size())
                self._enqueue(v if self.phase_[v] == 1 else -v, _NO_REASON)

        self._cancel_until(0)
        return SolveResult(status, model, self.stats())

    cdef int _pick_branch_var(self):
        cdef int v
        while self.heap_.size() > 0:
            v = self._heap_pop()
            if self.assign_[v] == _UNDEF:
                return v
        return 0

    def stats(self):
        return {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
            "restarts": self.restarts,
            "learned": self.learned,
            "clauses": self.live_clauses,
            "vars": self.nvars,
        }
