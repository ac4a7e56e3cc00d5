"""
Seed the Experiment Store with a Synthetic Benchmark
Generates a preset corpus and stores its texts, topics and ground-truth qrels
through the ORM.
"""

import sys

from app.store_functions import store_documents, store_qrels, store_topics
from app.synth_functions import generate, preset
from database import SessionLocal, create_tables
from models import Topic


def seed_database(name: str = 'expansion', seed: int = 0):
    """
    Populate the store with one generated benchmark.
    Re-seeding with the same preset and seed leaves the store unchanged.
    """
    db = SessionLocal()

    try:
        print(f"Seeding experiment store with preset '{name}' (seed {seed})...")
        corpus = generate(preset(name, seed))

        count = store_documents(db, corpus.documents, source=f"synthetic:{name}:{seed}")
        print(f"[OK] Stored {count} document texts")

        topics = store_topics(db, [Topic(TopicID=t, Title=title) for t, title in corpus.topics])
        print(f"[OK] Stored {len(topics)} topics")

        judged = store_qrels(db, corpus.ground_truth)
        print(f"[OK] Stored {judged} relevance judgments")

        print("\n[OK] Experiment store seeded successfully!")

    except Exception as e:
        print(f"[ERROR] Error seeding experiment store: {e}")
        raise
    finally:
        db.close()


if __name__ == "__main__":
    # Create tables first
    print("Creating experiment store tables...")
    create_tables()

    preset_name = sys.argv[1] if len(sys.argv) > 1 else 'expansion'
    preset_seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    seed_database(preset_name, preset_seed)
