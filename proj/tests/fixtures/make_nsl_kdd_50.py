"""Regenerates nsl_kdd_50.csv: 50 NSL-KDD-shaped records with fixed category counts."""

protocols = ["tcp"] * 30 + ["udp"] * 15 + ["icmp"] * 5
services = ["http"] * 20 + ["private"] * 12 + ["ftp_data"] * 10 + ["smtp"] * 8
flags = ["SF"] * 35 + ["S0"] * 10 + ["REJ"] * 5
attacks = ["neptune", "smurf", "portsweep", "guess_passwd", "buffer_overflow"]
labels = ["normal"] * 25 + [attacks[i % 5] for i in range(25)]


def rotate(items, k):
    return items[k:] + items[:k]


# Interleave so that no column is sorted by row.
protocols = [protocols[(i * 7) % 50] for i in range(50)]
services = [services[(i * 11) % 50] for i in range(50)]
flags = [flags[(i * 13) % 50] for i in range(50)]
labels = [labels[(i * 17) % 50] for i in range(50)]

with open("nsl_kdd_50.csv", "w") as out:
    for r in range(50):
        row = [str((r * 37) % 101)]
        row += [protocols[r], services[r], flags[r]]
        for c in range(4, 41):
            if c == 19:
                row.append("0")  # constant, like num_outbound_cmds
            elif c >= 24:
                row.append(f"{((r * (c + 3)) % 100) / 100:.2f}")
            else:
                row.append(str((r * (c + 1) + c) % 13))
        row.append(labels[r])
        row.append(str(r % 21 + 1))
        out.write(",".join(row) + "\n")
