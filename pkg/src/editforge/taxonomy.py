"""The 23-task editing taxonomy shared by routing, synthesis and verification.

The table below is the single source of truth for task identity, ordering and
category membership. Every per-task vector in the pipeline (router verdicts,
stats rows, prompt banks) iterates tasks in this order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Category(enum.Enum):
    GLOBAL_LEVEL = "GlobalLevel"
    OBJECT_LEVEL = "ObjectLevel"
    OBJECT_ATTRIBUTE = "ObjectAttribute"
    TEXT_AWARE = "TextAware"
    KNOWLEDGE_REASONING = "KnowledgeReasoning"
    COMPOSITIONAL = "Compositional"


@dataclass(frozen=True)
class TaskKind:
    """One editing task: stable id, display name, category, definition."""

    id: str
    name: str
    category: Category
    definition: str

    @property
    def is_text_aware(self) -> bool:
        return self.category is Category.TEXT_AWARE

    @property
    def is_reasoning(self) -> bool:
        return self.category is Category.KNOWLEDGE_REASONING


_TABLE = [
    # (id, name, category, definition)
    ("style_transfer", "Style Transfer", Category.GLOBAL_LEVEL,
     "Converts the overall artistic appearance of an image into a target style "
     "while preserving its structural and semantic content."),
    ("tone_adjustment", "Tone Adjustment", Category.GLOBAL_LEVEL,
     "Adjusts global tonal parameters such as brightness, contrast, saturation, "
     "or color temperature."),
    ("viewpoint_transformation", "Viewpoint Transformation", Category.GLOBAL_LEVEL,
     "Modifies the camera viewpoint or perspective geometry to present the scene "
     "from a new spatial angle."),
    ("background_replacement", "Background Replacement", Category.GLOBAL_LEVEL,
     "Replaces the entire background of an image while maintaining the integrity "
     "of the foreground objects."),
    ("object_addition", "Object Addition", Category.OBJECT_LEVEL,
     "Inserts new object instances into the scene while maintaining coherent "
     "spatial relationships and lighting conditions."),
    ("object_removal", "Object Removal", Category.OBJECT_LEVEL,
     "Removes designated objects and reconstructs the occluded background to "
     "preserve scene realism and continuity."),
    ("object_replacement", "Object Replacement", Category.OBJECT_LEVEL,
     "Substitutes an existing object with another object of similar semantics, "
     "ensuring consistency in scale, pose, and contextual relevance."),
    ("action_editing", "Action Editing", Category.OBJECT_LEVEL,
     "Modifies the pose, action, or behavioral state of animate subjects "
     "(e.g., humans or animals)."),
    ("part_extraction", "Part Extraction", Category.OBJECT_LEVEL,
     "Extracts specific parts or sub-regions from a complex object, enabling "
     "fine-grained manipulation or recomposition."),
    ("color_change", "Color Change", Category.OBJECT_ATTRIBUTE,
     "Alters the color attributes of a specific object or region while "
     "preserving shading and material coherence."),
    ("material_change", "Material Change", Category.OBJECT_ATTRIBUTE,
     "Modifies or replaces the surface texture or material properties of an "
     "object to achieve a different visual appearance."),
    ("visual_beautification", "Visual Beautification", Category.OBJECT_ATTRIBUTE,
     "Enhances or stylizes the appearance of animate subjects while maintaining "
     "identity consistency and structural realism."),
    ("count_change", "Count Change", Category.OBJECT_ATTRIBUTE,
     "Adjusts the number of primary objects in the scene, including duplication, "
     "reduction, or redistribution."),
    ("size_change", "Size Change", Category.OBJECT_ATTRIBUTE,
     "Manipulates the scale or relative size of an object while preserving its "
     "geometric proportion and contextual alignment."),
    ("movie_poster_text", "Movie Poster Text Editing", Category.TEXT_AWARE,
     "Replaces textual content appearing in movie posters while preserving "
     "stylistic coherence and typography consistency."),
    ("gui_interface_text", "GUI Interface Text Editing", Category.TEXT_AWARE,
     "Modifies textual elements in application interfaces, such as labels or "
     "button names, while maintaining layout integrity and interaction semantics."),
    ("object_surface_text", "Object Surface Text Editing", Category.TEXT_AWARE,
     "Alters text printed on object surfaces (e.g., daily goods, clothing) while "
     "preserving material properties and surface curvature."),
    ("building_surface_text", "Building Surface Text Editing", Category.TEXT_AWARE,
     "Edits text on architectural structures (e.g., road signs, or billboards) "
     "while ensuring geometric alignment and integration with the built environment."),
    ("perceptual_reasoning", "Perceptual Reasoning", Category.KNOWLEDGE_REASONING,
     "Performs logically consistent modifications to natural images based on "
     "causal, spatial, or functional relationships inferred from the scene."),
    ("symbolic_reasoning", "Symbolic Reasoning", Category.KNOWLEDGE_REASONING,
     "Applies reasoning-driven edits to abstract, symbolic, or synthetic visual "
     "scenes, ensuring internal logical consistency."),
    ("social_knowledge_reasoning", "Social Knowledge Reasoning", Category.KNOWLEDGE_REASONING,
     "Conducts edits guided by cultural norms, social semantics, or commonsense "
     "human conventions to ensure socially coherent outcomes."),
    ("scientific_knowledge_reasoning", "Scientific Knowledge Reasoning", Category.KNOWLEDGE_REASONING,
     "Produces scientifically valid edits constrained by physical, biological, "
     "or chemical principles, ensuring adherence to real-world scientific laws."),
    ("compositional_editing", "Compositional Editing", Category.COMPOSITIONAL,
     "Complex edits composed of multiple atomic editing instructions "
     "(e.g., Object Addition, Color Change, etc.)."),
]

TASKS: tuple[TaskKind, ...] = tuple(TaskKind(*row) for row in _TABLE)

_BY_ID = {t.id: t for t in TASKS}
_BY_NAME = {t.name: t for t in TASKS}


def taxonomy() -> list[TaskKind]:
    """All 23 task kinds in canonical table order."""
    return list(TASKS)


def task_by_id(task_id: str) -> TaskKind:
    try:
        return _BY_ID[task_id]
    except KeyError:
        raise KeyError(f"unknown task id: {task_id!r}") from None


def task_by_name(name: str) -> TaskKind:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown task name: {name!r}") from None


def tasks_in_category(category: Category) -> list[TaskKind]:
    return [t for t in TASKS if t.category is category]
