// evmcfg: EVM control-flow recovery and GCN contract classification
// Copyright 2026 The evmcfg Authors.
// SPDX-License-Identifier: Apache-2.0

#include <evmcfg/dataset.hpp>
#include <evmcfg/opcodes.hpp>

#include <cstdio>
#include <random>
#include <variant>

namespace evmcfg
{
namespace
{
/// Two-pass assembler: labels become JUMPDESTs, label references become
/// PUSH2 operands.
class Assembler
{
public:
    void op(uint8_t opcode) { items_.push_back(Op{opcode}); }

    void push(uint64_t value, int width = 1) { items_.push_back(Push{value, width}); }

    int new_label() { return next_label_++; }

    void push_label(int label) { items_.push_back(LabelRef{label}); }

    void place(int label) { items_.push_back(Place{label}); }

    void raw(uint8_t byte) { items_.push_back(Op{byte}); }

    [[nodiscard]] bytes assemble() const
    {
        std::vector<size_t> where(static_cast<size_t>(next_label_), 0);
        size_t pc = 0;
        for (const auto& item : items_)
        {
            if (const auto* p = std::get_if<Place>(&item))
                where[static_cast<size_t>(p->label)] = pc;
            pc += size_of(item);
        }

        bytes out;
        for (const auto& item : items_)
        {
            if (const auto* o = std::get_if<Op>(&item))
                out.push_back(o->opcode);
            else if (const auto* p = std::get_if<Push>(&item))
                emit_push(out, p->value, p->width);
            else if (const auto* r = std::get_if<LabelRef>(&item))
                emit_push(out, where[static_cast<size_t>(r->label)], 2);
            else
                out.push_back(OP_JUMPDEST);
        }
        return out;
    }

private:
    struct Op
    {
        uint8_t opcode;
    };
    struct Push
    {
        uint64_t value;
        int width;
    };
    struct LabelRef
    {
        int label;
    };
    struct Place
    {
        int label;
    };
    using Item = std::variant<Op, Push, LabelRef, Place>;

    static size_t size_of(const Item& item)
    {
        if (const auto* p = std::get_if<Push>(&item))
            return 1 + static_cast<size_t>(p->width);
        if (std::holds_alternative<LabelRef>(item))
            return 3;
        return 1;
    }

    static void emit_push(bytes& out, uint64_t value, int width)
    {
        out.push_back(static_cast<uint8_t>(OP_PUSH1 + width - 1));
        for (int i = width - 1; i >= 0; --i)
            out.push_back(static_cast<uint8_t>(value >> (8 * i)));
    }

    std::vector<Item> items_;
    int next_label_ = 0;
};

class ContractGenerator
{
public:
    explicit ContractGenerator(uint64_t seed) : rng_{seed} {}

    bytes generate(bool vulnerable)
    {
        Assembler a;
        a.push(0x80);
        a.push(0x40);
        a.op(OP_MSTORE);
        if (chance(0.5))
            nonpayable_guard(a);

        const int segments = uniform(2, 5);
        const int timestamp_at = vulnerable ? uniform(0, segments - 1) : -1;
        for (int s = 0; s < segments; ++s)
        {
            if (s == timestamp_at)
            {
                timestamp_branch(a);
                continue;
            }
            switch (uniform(0, 3))
            {
            case 0:
                guard(a);
                break;
            case 1:
                loop(a);
                break;
            case 2:
                hop(a);
                break;
            default:
                filler(a, uniform(2, 6));
                break;
            }
        }

        if (chance(0.5))
            a.op(OP_STOP);
        else
        {
            a.push(0x20);
            a.push(0x00);
            a.op(OP_RETURN);
        }

        // Unreachable tail: no JUMPDEST and nothing jumps here.
        if (chance(0.5))
        {
            if (!vulnerable)
                a.op(OP_TIMESTAMP);
            filler(a, uniform(1, 4));
            a.op(OP_STOP);
        }
        return a.assemble();
    }

private:
    int uniform(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<uint64_t>(hi - lo + 1)); }

    bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

    /// Straight-line code with no control flow and no TIMESTAMP.
    void filler(Assembler& a, int n)
    {
        static constexpr uint8_t unary[] = {OP_ISZERO, OP_NOT, OP_SLOAD, OP_MLOAD, OP_CALLDATALOAD};
        static constexpr uint8_t binary[] = {OP_ADD, OP_MUL, OP_SUB, OP_AND, OP_OR, OP_XOR, OP_EQ, OP_LT};
        static constexpr uint8_t nullary[] = {OP_CALLER, OP_CALLVALUE, OP_NUMBER, OP_GAS, OP_ADDRESS};
        for (int i = 0; i < n; ++i)
        {
            switch (uniform(0, 3))
            {
            case 0:
                a.push(rng_() & 0xff);
                a.op(unary[rng_() % std::size(unary)]);
                a.op(OP_POP);
                break;
            case 1:
                a.push(rng_() & 0xff);
                a.push(rng_() & 0xffff, 2);
                a.op(binary[rng_() % std::size(binary)]);
                a.op(OP_POP);
                break;
            case 2:
                a.op(nullary[rng_() % std::size(nullary)]);
                a.op(OP_POP);
                break;
            default:
                a.push(rng_() & 0xff);
                a.push(rng_() & 0xff);
                a.op(OP_SSTORE);
                break;
            }
        }
    }

    void condition(Assembler& a)
    {
        static constexpr uint8_t sources[] = {OP_CALLER, OP_CALLVALUE, OP_NUMBER, OP_CALLDATASIZE};
        a.op(sources[rng_() % std::size(sources)]);
        a.push(rng_() & 0xff);
        a.op(chance(0.5) ? OP_LT : OP_EQ);
    }

    void revert_tail(Assembler& a)
    {
        a.push(0x00);
        a.op(OP_DUP1);
        a.op(OP_REVERT);
    }

    void nonpayable_guard(Assembler& a)
    {
        const int ok = a.new_label();
        a.op(OP_CALLVALUE);
        a.op(OP_DUP1);
        a.op(OP_ISZERO);
        a.push_label(ok);
        a.op(OP_JUMPI);
        revert_tail(a);
        a.place(ok);
        a.op(OP_POP);
    }

    /// require(cond): the failing arm reverts.
    void guard(Assembler& a)
    {
        const int ok = a.new_label();
        condition(a);
        a.push_label(ok);
        a.op(OP_JUMPI);
        revert_tail(a);
        a.place(ok);
        filler(a, uniform(0, 3));
    }

    void loop(Assembler& a)
    {
        const int head = a.new_label();
        const int exit = a.new_label();
        a.place(head);
        condition(a);
        a.op(OP_ISZERO);
        a.push_label(exit);
        a.op(OP_JUMPI);
        filler(a, uniform(1, 4));
        a.push_label(head);
        a.op(OP_JUMP);
        a.place(exit);
        filler(a, uniform(0, 2));
    }

    /// Unconditional jump to the next code, as emitted for internal calls.
    void hop(Assembler& a)
    {
        const int target = a.new_label();
        filler(a, uniform(0, 2));
        a.push_label(target);
        a.op(OP_JUMP);
        a.place(target);
        filler(a, uniform(0, 2));
    }

    /// if (block.timestamp > k) { ... } else { ... } with both arms rejoining.
    void timestamp_branch(Assembler& a)
    {
        const int other = a.new_label();
        const int join = a.new_label();
        a.op(OP_TIMESTAMP);
        a.push(rng_() & 0xffffffff, 4);
        a.op(OP_GT);
        a.op(OP_ISZERO);
        a.push_label(other);
        a.op(OP_JUMPI);
        filler(a, uniform(1, 3));
        a.push_label(join);
        a.op(OP_JUMP);
        a.place(other);
        filler(a, uniform(1, 3));
        a.place(join);
        filler(a, uniform(0, 2));
    }

    std::mt19937_64 rng_;
};
}  // namespace

std::vector<DatasetRecord> synthetic_corpus(size_t count, uint64_t seed, double positive_fraction)
{
    ContractGenerator gen{seed};
    const auto positives = static_cast<size_t>(static_cast<double>(count) * positive_fraction + 0.5);
    std::vector<DatasetRecord> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i)
    {
        // Interleave so any prefix is roughly balanced.
        const bool vulnerable = (i * positives) / count != ((i + 1) * positives) / count;
        char id[32];
        std::snprintf(id, sizeof(id), "synth-%05zu", i);
        out.push_back({id, to_hex(gen.generate(vulnerable)), vulnerable ? 1 : 0, CodeOrigin::RuntimeOnly});
    }
    return out;
}
}  // namespace evmcfg
