"""A deliberately small word-level GRU encoder-decoder.

Big enough to overfit a toy corpus in a couple of epochs on CPU, small
enough to keep the smoke test fast. Paper-scale runs should point the
harness at a HuggingFace model identifier instead (see train.resolve_model).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn

PAD, BOS, EOS, UNK = 0, 1, 2, 3
_SPECIALS = ("<pad>", "<bos>", "<eos>", "<unk>")


class Vocab:
    """Whitespace word vocabulary with the four special symbols."""

    def __init__(self, tokens):
        self.itos = list(_SPECIALS) + sorted(set(tokens) - set(_SPECIALS))
        self.stoi = {token: index for index, token in enumerate(self.itos)}

    def __len__(self) -> int:
        return len(self.itos)

    @staticmethod
    def tokenize(text: str) -> list[str]:
        return text.lower().split()

    @classmethod
    def build(cls, texts) -> "Vocab":
        tokens = []
        for text in texts:
            tokens.extend(cls.tokenize(text))
        return cls(tokens)

    def encode(self, text: str, add_eos: bool = True) -> list[int]:
        ids = [self.stoi.get(token, UNK) for token in self.tokenize(text)]
        return ids + [EOS] if add_eos else ids

    def decode(self, ids) -> str:
        words = []
        for token_id in ids:
            if token_id == EOS:
                break
            if token_id in (PAD, BOS):
                continue
            words.append(self.itos[token_id] if token_id < len(self.itos) else "<unk>")
        return " ".join(words)


@dataclass(frozen=True)
class ModelConfig:
    embed_dim: int = 32
    hidden_dim: int = 64


class TinySeq2Seq(nn.Module):
    def __init__(self, src_vocab: Vocab, tgt_vocab: Vocab, config: ModelConfig = ModelConfig()):
        super().__init__()
        self.src_vocab = src_vocab
        self.tgt_vocab = tgt_vocab
        self.config = config
        self.src_embed = nn.Embedding(len(src_vocab), config.embed_dim, padding_idx=PAD)
        self.tgt_embed = nn.Embedding(len(tgt_vocab), config.embed_dim, padding_idx=PAD)
        self.encoder = nn.GRU(config.embed_dim, config.hidden_dim, batch_first=True)
        self.decoder = nn.GRU(config.embed_dim, config.hidden_dim, batch_first=True)
        self.out = nn.Linear(config.hidden_dim, len(tgt_vocab))

    def forward(self, src: torch.Tensor, tgt_in: torch.Tensor) -> torch.Tensor:
        _, state = self.encoder(self.src_embed(src))
        decoded, _ = self.decoder(self.tgt_embed(tgt_in), state)
        return self.out(decoded)

    @torch.no_grad()
    def greedy_decode(self, src_ids: list[int], max_len: int = 60) -> list[int]:
        self.eval()
        src = torch.tensor([src_ids or [EOS]], dtype=torch.long)
        _, state = self.encoder(self.src_embed(src))
        token = torch.tensor([[BOS]], dtype=torch.long)
        out_ids: list[int] = []
        for _ in range(max_len):
            decoded, state = self.decoder(self.tgt_embed(token), state)
            next_id = int(self.out(decoded[:, -1]).argmax(dim=-1))
            if next_id == EOS:
                break
            out_ids.append(next_id)
            token = torch.tensor([[next_id]], dtype=torch.long)
        return out_ids

    def translate(self, text: str) -> str:
        src_ids = self.src_vocab.encode(text)
        max_len = min(60, 2 * max(1, len(src_ids)) + 5)
        return self.tgt_vocab.decode(self.greedy_decode(src_ids, max_len))


def save_checkpoint(model: TinySeq2Seq, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    torch.save(
        {
            "state_dict": model.state_dict(),
            "src_itos": model.src_vocab.itos,
            "tgt_itos": model.tgt_vocab.itos,
            "embed_dim": model.config.embed_dim,
            "hidden_dim": model.config.hidden_dim,
        },
        path,
    )


def load_checkpoint(path: str | Path) -> TinySeq2Seq:
    payload = torch.load(Path(path), map_location="cpu", weights_only=False)
    src_vocab = Vocab([])
    src_vocab.itos = payload["src_itos"]
    src_vocab.stoi = {token: index for index, token in enumerate(src_vocab.itos)}
    tgt_vocab = Vocab([])
    tgt_vocab.itos = payload["tgt_itos"]
    tgt_vocab.stoi = {token: index for index, token in enumerate(tgt_vocab.itos)}
    model = TinySeq2Seq(
        src_vocab,
        tgt_vocab,
        ModelConfig(embed_dim=payload["embed_dim"], hidden_dim=payload["hidden_dim"]),
    )
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model
